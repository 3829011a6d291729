#pragma once

#include <cstdint>
#include <vector>

#include "ymh/geometry.hpp"
#include "ymh/grid.hpp"

namespace ymh {

/// Sign conventions of the (p,q) calculus. The flips exist only for mutation
/// testing of the convention-sensitive code paths; production entry points
/// use the defaults.
struct Conventions {
  bool flip_wedge = false;     // negates the (-1)^{q1 p2} wedge factor
  bool flip_dbar = false;      // negates the (-1)^p factor in dbar
  bool flip_division = false;  // negates the (-1)^{n(n-1)/2} division sign
};

/// Strictly increasing multi-indices of length p over {0..n-1}, encoded as
/// bitmasks listed in increasing numeric order.
class CombBasis {
 public:
  static const std::vector<std::uint32_t>& masks(int n, int p);
  static int index_of(int n, int p, std::uint32_t mask);
  static int count(int n, int p);
};

/// Sign of inserting dz^k in front of dz^I (I a mask not containing k):
/// (-1)^{#(i in I : i < k)}. Zero insertion is the caller's responsibility.
int insertion_sign(std::uint32_t mask, int k);

/// Sign of the shuffle merging two disjoint increasing multi-indices a, b
/// into one increasing multi-index: (-1)^{#inversions of (a, b)}.
int merge_sign(std::uint32_t a, std::uint32_t b);

/// A discretized section of A^{p,q} tensor (End E or trivial coefficients):
/// one grid of r x r matrices per pair of strictly increasing multi-indices
/// (I, J), |I| = p, |J| = q, the coefficient of dz^I (x) dzbar^J.
class PQField {
 public:
  PQField() = default;
  PQField(GridShape shape, int p, int q, int rank);

  static PQField unit(GridShape shape, int rank);  // (0,0) identity field

  const GridShape& shape() const { return shape_; }
  int p() const { return p_; }
  int q() const { return q_; }
  int rank() const { return rank_; }
  int slots_i() const { return CombBasis::count(shape_.dim, p_); }
  int slots_j() const { return CombBasis::count(shape_.dim, q_); }

  GridField& coeff(int iI, int iJ) { return coeffs_[iI * slots_j() + iJ]; }
  const GridField& coeff(int iI, int iJ) const {
    return coeffs_[iI * slots_j() + iJ];
  }
  GridField& coeff_by_mask(std::uint32_t maskI, std::uint32_t maskJ);
  const GridField& coeff_by_mask(std::uint32_t maskI, std::uint32_t maskJ) const;

  PQField& operator+=(const PQField& o);
  PQField& operator-=(const PQField& o);
  PQField& operator*=(Complex c);
  friend PQField operator+(PQField a, const PQField& b) { return a += b; }
  friend PQField operator-(PQField a, const PQField& b) { return a -= b; }
  friend PQField operator*(Complex c, PQField a) { return a *= c; }

  double sup_abs() const;
  bool all_finite() const;

 private:
  GridShape shape_;
  int p_ = 0, q_ = 0, rank_ = 1;
  std::vector<GridField> coeffs_;
};

/// del(phi (x) dzbar^J) = (1/2)(d phi) (x) dzbar^J, spectral derivatives.
PQField del(const PQField& a, const Conventions& conventions = {});

/// dbar(dz^I (x) psi) = (-1)^p (1/2) dz^I (x) (d psi).
PQField dbar(const PQField& a, const Conventions& conventions = {});

/// (phi1 (x) psi1) ^ (phi2 (x) psi2) = (-1)^{q1 p2} (phi1 ^ phi2) (x)
/// (psi1 ^ psi2); matrix coefficients multiply in argument order and 1x1
/// coefficients broadcast against r x r ones.
PQField wedge(const PQField& a, const PQField& b,
              const Conventions& conventions = {});

PQField wedge_power(const PQField& a, int k, const Conventions& conventions = {});

/// tr_g of a (1,1) field: sum_ij g^{ij}(x) a_ij(x), value rank preserved.
GridField contract_g(const AffineTorus& torus, const PQField& a);

/// Fiberwise trace, End-valued -> scalar-valued, degree preserved.
PQField trace_fiber(const PQField& a);

/// Wraps an endomorphism grid field as a (0,0) PQField.
PQField as_pq(const GridField& f);

/// The coefficient of a (0,0) field.
const GridField& scalar_part(const PQField& a);

}  // namespace ymh
