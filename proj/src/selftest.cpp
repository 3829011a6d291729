#include "ymh/selftest.hpp"

#include <algorithm>
#include <ostream>
#include <random>

#include "ymh/bundle.hpp"
#include "ymh/hermitian.hpp"
#include "ymh/random_fields.hpp"

namespace ymh {

namespace {

int tuple_sort_sign(std::vector<int>& t) {
  int sign = 1;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (t[i] > t[j]) {
        std::swap(t[i], t[j]);
        sign = -sign;
      }
  return sign;
}

/// Value of the totally antisymmetric extension of a constant PQField on an
/// arbitrary index tuple pair.
Eigen::MatrixXcd dense_value(const PQField& a, std::vector<int> iv,
                             std::vector<int> jv) {
  auto dup = [](const std::vector<int>& v) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      if (v[i] == v[i + 1]) return true;
    return false;
  };
  int sign = tuple_sort_sign(iv) * tuple_sort_sign(jv);
  if (dup(iv) || dup(jv))
    return Eigen::MatrixXcd::Zero(a.rank(), a.rank());
  std::uint32_t mi = 0, mj = 0;
  for (int i : iv) mi |= 1u << i;
  for (int j : jv) mj |= 1u << j;
  return Complex(sign) * a.coeff_by_mask(mi, mj).mat(0);
}

int perm_sign(const std::vector<int>& p) {
  int s = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) s = -s;
  return s;
}

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

PQField wedge_dense_oracle(const PQField& a, const PQField& b) {
  const int n = a.shape().dim;
  const int p1 = a.p(), q1 = a.q(), p2 = b.p(), q2 = b.q();
  const int p = p1 + p2, q = q1 + q2;
  PQField out(a.shape(), p, q, std::max(a.rank(), b.rank()));

  std::vector<int> pperm(p), qperm(q);
  for (int i = 0; i < p; ++i) pperm[i] = i;
  std::vector<std::vector<int>> pperms;
  do pperms.push_back(pperm);
  while (std::next_permutation(pperm.begin(), pperm.end()));
  for (int i = 0; i < q; ++i) qperm[i] = i;
  std::vector<std::vector<int>> qperms;
  do qperms.push_back(qperm);
  while (std::next_permutation(qperm.begin(), qperm.end()));

  double norm = factorial(p1) * factorial(p2) * factorial(q1) * factorial(q2);
  int base = (q1 * p2) % 2 == 0 ? 1 : -1;

  const auto& masksI = CombBasis::masks(n, p);
  const auto& masksJ = CombBasis::masks(n, q);
  for (std::uint32_t mi : masksI) {
    std::vector<int> iv;
    for (int k2 = 0; k2 < n; ++k2)
      if (mi & (1u << k2)) iv.push_back(k2);
    for (std::uint32_t mj : masksJ) {
      std::vector<int> jv;
      for (int k2 = 0; k2 < n; ++k2)
        if (mj & (1u << k2)) jv.push_back(k2);

      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(out.rank(), out.rank());
      for (const auto& sp : pperms) {
        for (const auto& sq : qperms) {
          std::vector<int> ia(p1), ib(p2), ja(q1), jb(q2);
          for (int t = 0; t < p1; ++t) ia[t] = iv[sp[t]];
          for (int t = 0; t < p2; ++t) ib[t] = iv[sp[p1 + t]];
          for (int t = 0; t < q1; ++t) ja[t] = jv[sq[t]];
          for (int t = 0; t < q2; ++t) jb[t] = jv[sq[q1 + t]];
          Eigen::MatrixXcd va = dense_value(a, ia, ja);
          Eigen::MatrixXcd vb = dense_value(b, ib, jb);
          if (va.rows() == 1 && vb.rows() > 1)
            acc += Complex(perm_sign(sp) * perm_sign(sq)) * va(0, 0) * vb;
          else if (vb.rows() == 1 && va.rows() > 1)
            acc += Complex(perm_sign(sp) * perm_sign(sq)) * vb(0, 0) * va;
          else
            acc += Complex(perm_sign(sp) * perm_sign(sq)) * va * vb;
        }
      }
      out.coeff_by_mask(mi, mj).mat(0) = Complex(base / norm) * acc;
    }
  }
  // broadcast the point-0 value over the grid (constant fields)
  for (int iI = 0; iI < out.slots_i(); ++iI)
    for (int iJ = 0; iJ < out.slots_j(); ++iJ) {
      GridField& c = out.coeff(iI, iJ);
      c = GridField::constant(out.shape(), c.mat(0));
    }
  return out;
}

IdentitySuiteResult run_identity_suite(int grid, int samples, std::uint64_t seed,
                                       const Conventions& cv) {
  IdentitySuiteResult res;
  GridShape shape{2, grid};
  const int n = 2;
  SmoothSpec spec{3, 0.3, 0.8};
  std::mt19937_64 rng(seed);

  // d^2 = 0, dbar^2 = 0, d dbar + dbar d = 0, Leibniz, graded commutativity
  for (int s = 0; s < samples; ++s) {
    for (int p = 0; p <= n; ++p) {
      for (int q = 0; q <= n; ++q) {
        PQField a = random_smooth_pq(shape, p, q, 2, rng(), spec);
        if (p + 2 <= n) res.d2 = std::max(res.d2, del(del(a, cv), cv).sup_abs());
        if (q + 2 <= n)
          res.dbar2 = std::max(res.dbar2, dbar(dbar(a, cv), cv).sup_abs());
        if (p < n && q < n) {
          PQField mixed = del(dbar(a, cv), cv) + dbar(del(a, cv), cv);
          res.mixed = std::max(res.mixed, mixed.sup_abs());
        }
      }
    }
    // Leibniz for del and dbar on a sample of bidegree pairs
    const int pairs[][4] = {{0, 0, 1, 0}, {1, 0, 0, 1}, {0, 1, 1, 0}, {1, 1, 0, 0},
                            {0, 1, 0, 1}, {1, 0, 1, 0}};
    for (const auto& bd : pairs) {
      PQField a = random_smooth_pq(shape, bd[0], bd[1], 2, rng(), spec);
      PQField b = random_smooth_pq(shape, bd[2], bd[3], 2, rng(), spec);
      int ga = (bd[0] + bd[1]) % 2 == 0 ? 1 : -1;
      if (bd[0] + bd[2] < n) {
        PQField lhs = del(wedge(a, b, cv), cv);
        PQField rhs = wedge(del(a, cv), b, cv) +
                      Complex(ga) * wedge(a, del(b, cv), cv);
        res.leibniz = std::max(res.leibniz, (lhs - rhs).sup_abs());
      }
      if (bd[1] + bd[3] < n) {
        PQField lhs = dbar(wedge(a, b, cv), cv);
        PQField rhs = wedge(dbar(a, cv), b, cv) +
                      Complex(ga) * wedge(a, dbar(b, cv), cv);
        res.leibniz = std::max(res.leibniz, (lhs - rhs).sup_abs());
      }
      // graded commutativity on scalar-valued fields
      PQField as = random_smooth_pq(shape, bd[0], bd[1], 1, rng(), spec);
      PQField bs = random_smooth_pq(shape, bd[2], bd[3], 1, rng(), spec);
      int gc = ((bd[0] + bd[1]) * (bd[2] + bd[3])) % 2 == 0 ? 1 : -1;
      PQField comm = wedge(as, bs, cv) - Complex(gc) * wedge(bs, as, cv);
      res.graded_comm = std::max(res.graded_comm, comm.sup_abs());
    }
  }

  // absolute sign of the operators: del sin(2 pi x^1) = pi cos(2 pi x^1) dz^1,
  // dbar sin(2 pi x^2) = pi cos(2 pi x^2) dzbar^2, and the p = 1 sign case
  {
    GridField s1(shape, 1), s2(shape, 1);
    for (std::int64_t x = 0; x < shape.points(); ++x) {
      s1.values()(0, x) = std::sin(2 * M_PI * shape.coord(x, 0));
      s2.values()(0, x) = std::sin(2 * M_PI * shape.coord(x, 1));
    }
    PQField d1 = del(as_pq(s1), cv);
    PQField d2f = dbar(as_pq(s2), cv);
    PQField f1(shape, 1, 0, 1);
    f1.coeff(0, 0) = s2;  // sin(2 pi x^2) dz^1
    PQField d3 = dbar(f1, cv);
    double worst = 0;
    for (std::int64_t x = 0; x < shape.points(); ++x) {
      double c0 = M_PI * std::cos(2 * M_PI * shape.coord(x, 0));
      double c1 = M_PI * std::cos(2 * M_PI * shape.coord(x, 1));
      worst = std::max(worst, std::abs(d1.coeff(0, 0).values()(0, x) - c0));
      worst = std::max(worst, std::abs(d2f.coeff(0, 1).values()(0, x) - c1));
      worst = std::max(worst,
                       std::abs(d3.coeff_by_mask(1u, 2u).values()(0, x) + c1));
    }
    res.operator_values = worst;
  }

  // wedge vs the dense alternating oracle on integer constant fields
  {
    std::uniform_int_distribution<int> pick(-2, 2);
    const int bids[][4] = {{1, 1, 1, 1}, {1, 0, 0, 1}, {0, 1, 1, 1}, {1, 1, 0, 0},
                           {2, 0, 0, 2}, {1, 0, 1, 0}};
    for (const auto& bd : bids) {
      PQField a(shape, bd[0], bd[1], 2), b(shape, bd[2], bd[3], 2);
      for (int iI = 0; iI < a.slots_i(); ++iI)
        for (int iJ = 0; iJ < a.slots_j(); ++iJ) {
          Eigen::MatrixXcd m(2, 2);
          for (int u = 0; u < 4; ++u) m(u / 2, u % 2) = pick(rng);
          a.coeff(iI, iJ) = GridField::constant(shape, m);
        }
      for (int iI = 0; iI < b.slots_i(); ++iI)
        for (int iJ = 0; iJ < b.slots_j(); ++iJ) {
          Eigen::MatrixXcd m(2, 2);
          for (int u = 0; u < 4; ++u) m(u / 2, u % 2) = pick(rng);
          b.coeff(iI, iJ) = GridField::constant(shape, m);
        }
      PQField got = wedge(a, b, cv);
      PQField want = wedge_dense_oracle(a, b);
      res.wedge_sign = std::max(res.wedge_sign, (got - want).sup_abs());
    }
  }

  // division-by-nu sign: chi = nu (x) (coefficient-1 top form) integrates to
  // (-1)^{n(n-1)/2} = -1 on T^2
  {
    AffineTorus torus = make_torus(2, grid, Eigen::MatrixXd::Identity(2, 2), 1.5);
    PQField chi(shape, 2, 2, 1);
    chi.coeff(0, 0) = GridField::constant(
        shape, Eigen::MatrixXcd::Constant(1, 1, torus.nu()));
    res.division_sign = std::abs(integrate(torus, chi, cv) - (-1.0));
  }

  // Chern identity (tr K^phi) omega^n = n c1 ^ omega^{n-1} on rank-2 bundles
  // with random smooth metrics (production conventions; convention mutations
  // are caught by the pure-calculus checks above)
  {
    Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
    Eigen::MatrixXcd jordan(2, 2), zero = Eigen::MatrixXcd::Zero(2, 2);
    jordan << 0, 1, 0, 0;
    Eigen::MatrixXcd unip(2, 2);
    unip << 1, 1, 0, 1;
    std::vector<FlatHiggsBundle> bundles;
    bundles.push_back(make_bundle(2, {id2, id2}, {jordan, zero}));
    bundles.push_back(make_bundle(2, {unip, id2}, {zero, zero}));

    GridField gf(shape, 2);
    for (std::int64_t x = 0; x < shape.points(); ++x) {
      Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(2, 2);
      g(0, 0) = 1.0 + 0.5 * std::sin(2 * M_PI * shape.coord(x, 0));
      g(1, 1) = 1.0 + 0.5 * std::cos(2 * M_PI * shape.coord(x, 1));
      gf.mat(x) = g;
    }
    std::vector<AffineTorus> tori;
    tori.push_back(make_torus(2, grid, Eigen::MatrixXd::Identity(2, 2), 1.0));
    tori.push_back(make_torus(2, grid, gf, 1.0));

    for (const auto& torus : tori) {
      PQField om = omega_form(torus);
      PQField omn = wedge_power(om, 2);
      PQField omn1 = om;
      for (const auto& bundle : bundles) {
        for (int s = 0; s < std::max(1, samples / 2); ++s) {
          MetricField h(random_smooth_spd(shape, 2, rng(), SmoothSpec{2, 0.25, 0.9}));
          GridField k = mean_curvature(bundle, torus, h);
          PQField c1 = first_chern_form(bundle, torus, h);
          PQField lhs = wedge(as_pq(k.tracewise()), omn);
          PQField rhs = Complex(2.0) * wedge(c1, omn1);
          res.chern_identity =
              std::max(res.chern_identity, (lhs - rhs).sup_abs());
          // degree well-definedness across random metric pairs
          MetricField h2(
              random_smooth_spd(shape, 2, rng(), SmoothSpec{2, 0.25, 0.9}));
          res.degree_pairs = std::max(
              res.degree_pairs,
              std::abs(degree(bundle, torus, h) - degree(bundle, torus, h2)));
        }
      }
    }
  }
  return res;
}

void print_suite(std::ostream& os, const IdentitySuiteResult& r) {
  os << "d2=" << r.d2 << " dbar2=" << r.dbar2 << " mixed=" << r.mixed
     << " leibniz=" << r.leibniz << " opvalues=" << r.operator_values
     << " wedge_sign=" << r.wedge_sign
     << " division_sign=" << r.division_sign << " graded_comm=" << r.graded_comm
     << " chern=" << r.chern_identity << " degree_pairs=" << r.degree_pairs
     << (r.pass() ? "  [ok]" : "  [FAIL]") << "\n";
}

}  // namespace ymh
