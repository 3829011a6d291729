#include "ymh/calculus.hpp"

#include <bit>
#include <map>

#include "ymh/fourier.hpp"

namespace ymh {

namespace {

int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return static_cast<int>(r);
}

}  // namespace

const std::vector<std::uint32_t>& CombBasis::masks(int n, int p) {
  static std::map<std::pair<int, int>, std::vector<std::uint32_t>> cache;
  auto key = std::make_pair(n, p);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 0; m < (1u << n); ++m)
    if (std::popcount(m) == p) out.push_back(m);
  return cache.emplace(key, std::move(out)).first->second;
}

int CombBasis::index_of(int n, int p, std::uint32_t mask) {
  const auto& ms = masks(n, p);
  auto it = std::lower_bound(ms.begin(), ms.end(), mask);
  return static_cast<int>(it - ms.begin());
}

int CombBasis::count(int n, int p) { return binom(n, p); }

int insertion_sign(std::uint32_t mask, int k) {
  return (std::popcount(mask & ((1u << k) - 1)) % 2 == 0) ? 1 : -1;
}

int merge_sign(std::uint32_t a, std::uint32_t b) {
  int inversions = 0;
  for (int k = 0; k < 32; ++k)
    if (b & (1u << k)) inversions += std::popcount(a >> (k + 1));
  return (inversions % 2 == 0) ? 1 : -1;
}

PQField::PQField(GridShape shape, int p, int q, int rank)
    : shape_(shape), p_(p), q_(q), rank_(rank) {
  if (p < 0 || q < 0 || p > shape.dim || q > shape.dim)
    fail(ErrorCode::DegreeMismatch, "bidegree outside [0, dim]");
  coeffs_.assign(static_cast<std::size_t>(slots_i()) * slots_j(),
                 GridField(shape, rank));
}

PQField PQField::unit(GridShape shape, int rank) {
  PQField out(shape, 0, 0, rank);
  out.coeffs_[0] = identity_field(shape, rank);
  return out;
}

GridField& PQField::coeff_by_mask(std::uint32_t maskI, std::uint32_t maskJ) {
  return coeff(CombBasis::index_of(shape_.dim, p_, maskI),
               CombBasis::index_of(shape_.dim, q_, maskJ));
}

const GridField& PQField::coeff_by_mask(std::uint32_t maskI,
                                        std::uint32_t maskJ) const {
  return coeff(CombBasis::index_of(shape_.dim, p_, maskI),
               CombBasis::index_of(shape_.dim, q_, maskJ));
}

PQField& PQField::operator+=(const PQField& o) {
  if (p_ != o.p_ || q_ != o.q_) fail(ErrorCode::DegreeMismatch, "PQField add");
  for (std::size_t s = 0; s < coeffs_.size(); ++s) coeffs_[s] += o.coeffs_[s];
  return *this;
}

PQField& PQField::operator-=(const PQField& o) {
  if (p_ != o.p_ || q_ != o.q_) fail(ErrorCode::DegreeMismatch, "PQField sub");
  for (std::size_t s = 0; s < coeffs_.size(); ++s) coeffs_[s] -= o.coeffs_[s];
  return *this;
}

PQField& PQField::operator*=(Complex c) {
  for (auto& f : coeffs_) f *= c;
  return *this;
}

double PQField::sup_abs() const {
  double m = 0;
  for (const auto& f : coeffs_) m = std::max(m, f.sup_abs());
  return m;
}

bool PQField::all_finite() const {
  for (const auto& f : coeffs_)
    if (!f.all_finite()) return false;
  return true;
}

PQField del(const PQField& a, const Conventions&) {
  const int n = a.shape().dim;
  if (a.p() == n) fail(ErrorCode::TopDegree, "del of a (n,q) field");
  PQField out(a.shape(), a.p() + 1, a.q(), a.rank());
  const auto& masksI = CombBasis::masks(n, a.p());
  const auto& masksJ = CombBasis::masks(n, a.q());
  for (int iI = 0; iI < a.slots_i(); ++iI) {
    for (int iJ = 0; iJ < a.slots_j(); ++iJ) {
      for (int k = 0; k < n; ++k) {
        if (masksI[iI] & (1u << k)) continue;
        GridField d = spectral_derivative(a.coeff(iI, iJ), k);
        d *= Complex(0.5 * insertion_sign(masksI[iI], k));
        out.coeff_by_mask(masksI[iI] | (1u << k), masksJ[iJ]) += d;
      }
    }
  }
  return out;
}

PQField dbar(const PQField& a, const Conventions& conventions) {
  const int n = a.shape().dim;
  if (a.q() == n) fail(ErrorCode::TopDegree, "dbar of a (p,n) field");
  PQField out(a.shape(), a.p(), a.q() + 1, a.rank());
  int psign = (a.p() % 2 == 0) ? 1 : -1;
  if (conventions.flip_dbar) psign = -psign;
  const auto& masksI = CombBasis::masks(n, a.p());
  const auto& masksJ = CombBasis::masks(n, a.q());
  for (int iI = 0; iI < a.slots_i(); ++iI) {
    for (int iJ = 0; iJ < a.slots_j(); ++iJ) {
      for (int k = 0; k < n; ++k) {
        if (masksJ[iJ] & (1u << k)) continue;
        GridField d = spectral_derivative(a.coeff(iI, iJ), k);
        d *= Complex(0.5 * psign * insertion_sign(masksJ[iJ], k));
        out.coeff_by_mask(masksI[iI], masksJ[iJ] | (1u << k)) += d;
      }
    }
  }
  return out;
}

PQField wedge(const PQField& a, const PQField& b, const Conventions& conventions) {
  const int n = a.shape().dim;
  if (a.shape() != b.shape()) fail(ErrorCode::DegreeMismatch, "wedge shapes differ");
  if (a.p() + b.p() > n || a.q() + b.q() > n)
    fail(ErrorCode::DegreeOverflow, "wedge bidegree exceeds (n,n)");
  if (a.rank() != b.rank() && a.rank() != 1 && b.rank() != 1)
    fail(ErrorCode::RankMismatch, "wedge value ranks incompatible");
  PQField out(a.shape(), a.p() + b.p(), a.q() + b.q(),
              std::max(a.rank(), b.rank()));
  int base = (a.q() * b.p()) % 2 == 0 ? 1 : -1;
  if (conventions.flip_wedge) base = -base;
  const auto& mI1 = CombBasis::masks(n, a.p());
  const auto& mJ1 = CombBasis::masks(n, a.q());
  const auto& mI2 = CombBasis::masks(n, b.p());
  const auto& mJ2 = CombBasis::masks(n, b.q());
  for (int i1 = 0; i1 < a.slots_i(); ++i1) {
    for (int i2 = 0; i2 < b.slots_i(); ++i2) {
      if (mI1[i1] & mI2[i2]) continue;
      int si = merge_sign(mI1[i1], mI2[i2]);
      for (int j1 = 0; j1 < a.slots_j(); ++j1) {
        for (int j2 = 0; j2 < b.slots_j(); ++j2) {
          if (mJ1[j1] & mJ2[j2]) continue;
          int sgn = base * si * merge_sign(mJ1[j1], mJ2[j2]);
          GridField prod = matmul(a.coeff(i1, j1), b.coeff(i2, j2));
          prod *= Complex(sgn);
          out.coeff_by_mask(mI1[i1] | mI2[i2], mJ1[j1] | mJ2[j2]) += prod;
        }
      }
    }
  }
  return out;
}

PQField wedge_power(const PQField& a, int k, const Conventions& conventions) {
  PQField out = PQField::unit(a.shape(), a.rank());
  for (int i = 0; i < k; ++i) out = wedge(out, a, conventions);
  return out;
}

GridField contract_g(const AffineTorus& torus, const PQField& a) {
  if (a.p() != 1 || a.q() != 1)
    fail(ErrorCode::DegreeMismatch, "contract_g needs a (1,1) field");
  const int n = torus.dim();
  GridField out(a.shape(), a.rank());
  const GridField& ginv = torus.metric_inverse();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const GridField& c = a.coeff(i, j);  // single-bit masks are axis-ordered
      for (std::int64_t x = 0; x < c.points(); ++x)
        out.values().col(x) += ginv.values()(i + j * n, x) * c.values().col(x);
    }
  }
  return out;
}

PQField trace_fiber(const PQField& a) {
  PQField out(a.shape(), a.p(), a.q(), 1);
  for (int iI = 0; iI < a.slots_i(); ++iI)
    for (int iJ = 0; iJ < a.slots_j(); ++iJ)
      out.coeff(iI, iJ) = a.coeff(iI, iJ).tracewise();
  return out;
}

PQField as_pq(const GridField& f) {
  PQField out(f.shape(), 0, 0, f.rows());
  out.coeff(0, 0) = f;
  return out;
}

const GridField& scalar_part(const PQField& a) {
  if (a.p() != 0 || a.q() != 0)
    fail(ErrorCode::DegreeMismatch, "scalar_part needs a (0,0) field");
  return a.coeff(0, 0);
}

}  // namespace ymh
