#include "ymh/stability.hpp"

#include <algorithm>

namespace ymh {

namespace {

std::vector<Eigen::MatrixXcd> generators(const FlatHiggsBundle& bundle) {
  std::vector<Eigen::MatrixXcd> gens = bundle.monodromy();
  gens.insert(gens.end(), bundle.higgs().begin(), bundle.higgs().end());
  return gens;
}

Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& basis) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
  Eigen::MatrixXcd q = qr.householderQ() *
                       Eigen::MatrixXcd::Identity(basis.rows(), basis.cols());
  return q;
}

/// Null space basis (columns) of m, singular values below tol.
Eigen::MatrixXcd null_space(const Eigen::MatrixXcd& m, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int dim = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) <= tol) ++dim;
  return svd.matrixV().rightCols(dim);
}

/// Eigenvalue clusters of a small matrix, pairs of (representative, algebraic
/// multiplicity).
std::vector<std::pair<Complex, int>> eigen_clusters(const Eigen::MatrixXcd& a,
                                                    double tol) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);
  std::vector<Complex> vals(es.eigenvalues().data(),
                            es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(vals.begin(), vals.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  std::vector<std::pair<Complex, int>> clusters;
  for (Complex v : vals) {
    if (!clusters.empty() && std::abs(v - clusters.back().first) <= tol)
      clusters.back().second++;
    else
      clusters.emplace_back(v, 1);
  }
  return clusters;
}

/// Refines the orthonormal component bases by the generalized eigenspaces of
/// the restriction of `gen` to each component.
std::vector<Eigen::MatrixXcd> refine_by_generator(
    const std::vector<Eigen::MatrixXcd>& components, const Eigen::MatrixXcd& gen) {
  std::vector<Eigen::MatrixXcd> out;
  for (const auto& b : components) {
    const int d = static_cast<int>(b.cols());
    Eigen::MatrixXcd a = b.adjoint() * gen * b;
    double scale = std::max(1.0, a.norm());
    auto clusters = eigen_clusters(a, 1e-8 * scale);
    if (clusters.size() == 1) {
      out.push_back(b);
      continue;
    }
    for (const auto& [lambda, mult] : clusters) {
      Eigen::MatrixXcd shifted = a - lambda * Eigen::MatrixXcd::Identity(d, d);
      shifted /= std::max(1.0, shifted.norm());
      Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(d, d);
      for (int t = 0; t < d; ++t) power = power * shifted;
      Eigen::MatrixXcd ker = null_space(power, 1e-8);
      (void)mult;
      if (ker.cols() > 0) out.push_back(orthonormalize(b * ker));
    }
  }
  return out;
}

/// Joint kernel inside a component: intersection over generators of
/// ker(gen|_V - lambda_gen), the joint eigenspace.
Eigen::MatrixXcd joint_eigenspace(const std::vector<Eigen::MatrixXcd>& gens,
                                  const Eigen::MatrixXcd& b) {
  const int d = static_cast<int>(b.cols());
  Eigen::MatrixXcd stacked(static_cast<int>(gens.size()) * d, d);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    Eigen::MatrixXcd a = b.adjoint() * gens[g] * b;
    double scale = std::max(1.0, a.norm());
    auto clusters = eigen_clusters(a, 1e-8 * scale);
    // inside a primary component every generator has one eigenvalue cluster
    Complex lambda = clusters.front().first;
    Eigen::MatrixXcd shifted = a - lambda * Eigen::MatrixXcd::Identity(d, d);
    stacked.middleRows(static_cast<int>(g) * d, d) = shifted / scale;
  }
  Eigen::MatrixXcd ker = null_space(stacked, 1e-8);
  if (ker.cols() == 0) return Eigen::MatrixXcd(b.rows(), 0);
  return orthonormalize(b * ker);
}

double invariance_residual(const std::vector<Eigen::MatrixXcd>& gens,
                           const Eigen::MatrixXcd& basis) {
  const int r = static_cast<int>(basis.rows());
  Eigen::MatrixXcd proj =
      Eigen::MatrixXcd::Identity(r, r) - basis * basis.adjoint();
  double res = 0;
  for (const auto& g : gens)
    res = std::max(res, (proj * g * basis).norm() / std::max(1.0, g.norm()));
  return res;
}

bool same_subspace(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.cols() != b.cols()) return false;
  return (a * a.adjoint() - b * b.adjoint()).norm() < 1e-8;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::semistable_not_polystable: return "semistable_not_polystable";
    case Verdict::polystable: return "polystable";
    case Verdict::unstable: return "unstable";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

std::vector<Eigen::MatrixXcd> invariant_subspaces(const FlatHiggsBundle& bundle) {
  const int r = bundle.rank();
  auto gens = generators(bundle);

  std::vector<Eigen::MatrixXcd> components{Eigen::MatrixXcd::Identity(r, r)};
  for (const auto& g : gens) components = refine_by_generator(components, g);

  // per-component choices: nothing, the joint eigenspace (if proper), or the
  // whole component; candidates are the direct sums over all choices
  std::vector<std::vector<Eigen::MatrixXcd>> choices;
  for (const auto& comp : components) {
    std::vector<Eigen::MatrixXcd> c{Eigen::MatrixXcd(r, 0), comp};
    Eigen::MatrixXcd je = joint_eigenspace(gens, comp);
    if (je.cols() > 0 && je.cols() < comp.cols()) c.push_back(je);
    choices.push_back(std::move(c));
  }

  std::vector<Eigen::MatrixXcd> out;
  std::vector<std::size_t> pick(choices.size(), 0);
  while (true) {
    int total = 0;
    for (std::size_t i = 0; i < choices.size(); ++i)
      total += static_cast<int>(choices[i][pick[i]].cols());
    if (total > 0 && total < r) {
      Eigen::MatrixXcd basis(r, total);
      int at = 0;
      for (std::size_t i = 0; i < choices.size(); ++i) {
        const auto& c = choices[i][pick[i]];
        basis.middleCols(at, c.cols()) = c;
        at += static_cast<int>(c.cols());
      }
      basis = orthonormalize(basis);
      if (invariance_residual(gens, basis) < 1e-10) {
        bool dup = false;
        for (const auto& prev : out) dup = dup || same_subspace(prev, basis);
        if (!dup) out.push_back(basis);
      }
    }
    std::size_t k = 0;
    while (k < choices.size() && ++pick[k] == choices[k].size()) pick[k++] = 0;
    if (k == choices.size()) break;
  }
  return out;
}

bool simultaneously_diagonalizable(const FlatHiggsBundle& bundle) {
  const int r = bundle.rank();
  for (const auto& g : generators(bundle)) {
    double scale = std::max(1.0, g.norm());
    auto clusters = eigen_clusters(g, 1e-8 * scale);
    int geometric = 0;
    for (const auto& [lambda, mult] : clusters) {
      (void)mult;
      Eigen::MatrixXcd shifted =
          (g - lambda * Eigen::MatrixXcd::Identity(r, r)) / scale;
      geometric += static_cast<int>(null_space(shifted, 1e-8).cols());
    }
    if (geometric != r) return false;
  }
  return true;
}

FlatHiggsBundle restrict_bundle(const FlatHiggsBundle& bundle,
                                const Eigen::MatrixXcd& basis, double tol) {
  auto gens = generators(bundle);
  if (invariance_residual(gens, basis) > tol)
    fail(ErrorCode::NotInvariant, "subspace is not jointly invariant");
  std::vector<Eigen::MatrixXcd> mono, higgs;
  for (const auto& m : bundle.monodromy()) mono.push_back(basis.adjoint() * m * basis);
  for (const auto& p : bundle.higgs()) higgs.push_back(basis.adjoint() * p * basis);
  return make_bundle(static_cast<int>(basis.cols()), mono, higgs);
}

StabilityReport stability_verdict(const FlatHiggsBundle& bundle,
                                  const AffineTorus& torus, double slope_tol) {
  StabilityReport report;
  MetricField h = MetricField::identity(torus.shape(), bundle.rank());
  report.mu_E = slope(bundle, torus, h);
  report.simultaneously_diagonalizable = simultaneously_diagonalizable(bundle);

  auto subspaces = invariant_subspaces(bundle);
  int n_above = 0, n_below = 0, n_tie = 0;
  for (const auto& basis : subspaces) {
    FlatHiggsBundle sub = restrict_bundle(bundle, basis);
    MetricField hs = MetricField::identity(torus.shape(), sub.rank());
    double mu = slope(sub, torus, hs);
    report.witnesses.push_back({basis, sub.rank(), mu});
    double d = mu - report.mu_E;
    if (d > slope_tol)
      ++n_above;
    else if (d < -slope_tol)
      ++n_below;
    else
      ++n_tie;
  }

  if (n_above > 0) {
    report.verdict = Verdict::unstable;
    return report;
  }
  if (n_tie == 0) {
    report.verdict = Verdict::stable;  // includes rank 1: no proper subbundles
    return report;
  }
  if (!report.simultaneously_diagonalizable) {
    report.verdict = Verdict::semistable_not_polystable;
    return report;
  }
  // diagonalizable: polystable iff the stable (joint eigenline) summands all
  // share the slope of E
  double max_dev = 0;
  for (const auto& w : report.witnesses)
    if (w.rank == 1) max_dev = std::max(max_dev, std::abs(w.slope - report.mu_E));
  report.verdict =
      (max_dev <= slope_tol) ? Verdict::polystable : Verdict::indeterminate;
  return report;
}

SlopeDefectResult slope_defect(const FlatHiggsBundle& bundle,
                               const AffineTorus& torus, const MetricField& h,
                               const Eigen::MatrixXcd& f_basis,
                               bool check_identity, double identity_tol) {
  const int r = bundle.rank();
  const int s = static_cast<int>(f_basis.cols());
  const int n = torus.dim();
  Eigen::MatrixXcd basis = orthonormalize(f_basis);
  auto gens = generators(bundle);
  if (invariance_residual(gens, basis) > 1e-10)
    fail(ErrorCode::NotInvariant, "subspace is not jointly invariant");

  FlatHiggsBundle sub = restrict_bundle(bundle, basis);

  // induced metric h_F = B^dagger H B
  const GridShape& shape = torus.shape();
  GridField hf(shape, s);
  for (std::int64_t x = 0; x < hf.points(); ++x)
    hf.mat(x) = basis.adjoint() * h.field().mat(x) * basis;
  MetricField h_sub(hf, 0.0);

  PQField a_full = extended_connection_form(bundle, torus, h);
  PQField a_sub = extended_connection_form(sub, torus, h_sub);
  PQField phi_star = higgs_adjoint(bundle, h);
  PQField phi_star_sub = higgs_adjoint(sub, h_sub);

  GridField hfinv = hf.inversewise();
  GridField a_density(shape, 1), p_density(shape, 1);
  const GridField& ginv = torus.metric_inverse();
  for (std::int64_t x = 0; x < shape.points(); ++x) {
    std::vector<Eigen::MatrixXcd> second_ff(n), higgs_def(n);
    for (int k = 0; k < n; ++k) {
      second_ff[k] =
          a_full.coeff(k, 0).mat(x) * basis - basis * a_sub.coeff(k, 0).mat(x);
      higgs_def[k] = phi_star.coeff(0, k).mat(x) * basis -
                     basis * phi_star_sub.coeff(0, k).mat(x);
    }
    Complex asum = 0, psum = 0;
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        Complex w = ginv.values()(k + l * n, x);
        asum += w * (hfinv.mat(x) * second_ff[l].adjoint() * h.field().mat(x) *
                     second_ff[k])
                        .trace();
        psum += w * (hfinv.mat(x) * higgs_def[l].adjoint() * h.field().mat(x) *
                     higgs_def[k])
                        .trace();
      }
    }
    a_density.values()(0, x) = asum;
    p_density.values()(0, x) = psum;
  }

  PQField wn = wedge_power(omega_form(torus), n);
  SlopeDefectResult out;
  out.a_norm2 = integrate(torus, wedge(as_pq(a_density), wn));
  out.phi_tilde_norm2 = integrate(torus, wedge(as_pq(p_density), wn));

  MetricField h_id_e = MetricField::identity(shape, r);
  MetricField h_id_f = MetricField::identity(shape, s);
  double mu_e = slope(bundle, torus, h_id_e);
  double mu_f = slope(sub, torus, h_id_f);
  out.mu_gap = mu_e - mu_f;
  out.identity_residual =
      std::abs(out.mu_gap - (out.a_norm2 + out.phi_tilde_norm2) / (s * n));
  if (check_identity && out.identity_residual > identity_tol)
    fail(ErrorCode::NotInvariant,
         "Chern-Weil slope-defect identity violated (residual " +
             std::to_string(out.identity_residual) + ")");
  return out;
}

}  // namespace ymh
