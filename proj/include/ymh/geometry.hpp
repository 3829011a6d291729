#pragma once

#include <Eigen/Dense>

#include "ymh/grid.hpp"

namespace ymh {

class PQField;
struct Conventions;

/// Flat torus R^n/Z^n with a Riemannian metric g_ij(x) in affine coordinates
/// and a parallel volume form nu * dx^1 ^ ... ^ dx^n with constant nu > 0.
class AffineTorus {
 public:
  AffineTorus(GridShape shape, GridField metric, double nu);

  const GridShape& shape() const { return shape_; }
  int dim() const { return shape_.dim; }
  double nu() const { return nu_; }

  /// g_ij as an (n x n)-valued grid field.
  const GridField& metric() const { return metric_; }
  /// g^{ij} pointwise inverse.
  const GridField& metric_inverse() const { return metric_inv_; }
  /// Grid average of g^{ij} (real part), used for spectral preconditioning.
  const Eigen::MatrixXd& metric_inverse_mean() const { return ginv_mean_; }

  bool metric_is_constant() const { return metric_constant_; }

 private:
  GridShape shape_;
  double nu_;
  GridField metric_;
  GridField metric_inv_;
  Eigen::MatrixXd ginv_mean_;
  bool metric_constant_ = false;
};

/// Validates and builds a torus. The metric may vary over the grid; a constant
/// matrix is broadcast with AffineTorus(shape, GridField::constant(...), nu).
AffineTorus make_torus(int dim, int grid, const GridField& metric, double nu);
AffineTorus make_torus(int dim, int grid, const Eigen::MatrixXd& constant_metric,
                       double nu);

/// omega_g = sum_ij g_ij dz^i (x) dzbar^j as a scalar-valued (1,1) field.
PQField omega_form(const AffineTorus& torus);

/// Integral over M of chi / nu for a scalar-valued (n,n) field chi, using the
/// division-by-nu sign (-1)^{n(n-1)/2} and the trapezoidal rule on the
/// periodic grid.
double integrate(const AffineTorus& torus, const PQField& chi);
double integrate(const AffineTorus& torus, const PQField& chi,
                 const Conventions& conventions);

/// sup norm over grid and slots of del dbar (omega^{n-1}); zero (to
/// discretization error) iff g is affine Gauduchon.
double gauduchon_defect(const AffineTorus& torus);

/// sup norm of del dbar (omega^{n-2}); requires dim >= 2. Identically zero
/// when dim == 2.
double astheno_defect(const AffineTorus& torus);

}  // namespace ymh
