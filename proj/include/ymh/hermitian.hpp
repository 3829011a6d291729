#pragma once

#include "ymh/bundle.hpp"
#include "ymh/calculus.hpp"
#include "ymh/geometry.hpp"

namespace ymh {

/// Hermitian positive definite r x r matrix field: the matrix of a Hermitian
/// metric h on E in the periodic gauge.
class MetricField {
 public:
  MetricField() = default;
  explicit MetricField(GridField h, double eigenvalue_floor = 1e-10);

  static MetricField identity(GridShape shape, int rank);

  int rank() const { return field_.rows(); }
  const GridField& field() const { return field_; }
  const GridShape& shape() const { return field_.shape(); }
  double eigenvalue_floor() const { return floor_; }

 private:
  GridField field_;
  double floor_ = 1e-10;
};

/// The three components of the extended curvature form Omega^phi.
struct CurvatureBundle {
  PQField part20;  // del^h phi
  PQField part11;  // dbar theta + [phi, phi*]
  PQField part02;  // dbar (phi*)
};

/// phi = sum_i phi_i (x) dz^i as an End-valued (1,0) field.
PQField higgs_form(const FlatHiggsBundle& bundle, GridShape shape);

/// Componentwise adjoint (phi_i)* = H^{-1} phi_i^dagger H on the dzbar^i slots.
PQField higgs_adjoint(const FlatHiggsBundle& bundle, const MetricField& h);

/// Extended connection form theta of (E, phi, h) in the periodic gauge; the
/// (1,0) coefficient on dz^k is (1/2)(H^{-1} d_k H - H^{-1} L_k^dagger H).
PQField extended_connection_form(const FlatHiggsBundle& bundle,
                                 const AffineTorus& torus, const MetricField& h);

/// The (0,1) connection coefficient of the flat extended connection in the
/// periodic gauge: (1/2) L_k on dzbar^k.
PQField flat_connection_form_01(const FlatHiggsBundle& bundle, GridShape shape);

/// Graded commutator [beta, a] = beta ^ a - (-1)^{deg a} a ^ beta of an odd
/// (degree-one) form beta with a.
PQField graded_comm(const PQField& beta, const PQField& a);

/// Covariant (1,0) derivative del^h on End-valued fields (periodic gauge).
PQField del_h(const FlatHiggsBundle& bundle, const AffineTorus& torus,
              const MetricField& h, const PQField& a);

/// Covariant flat (0,1) derivative dbar^nabla on End-valued fields.
PQField dbar_flat(const FlatHiggsBundle& bundle, const PQField& a);

/// Covariant flat (1,0) derivative del^nabla on End-valued fields.
PQField del_flat(const FlatHiggsBundle& bundle, const PQField& a);

CurvatureBundle extended_curvature(const FlatHiggsBundle& bundle,
                                   const AffineTorus& torus,
                                   const MetricField& h);

/// K^phi = tr_g (dbar theta + [phi, phi*]).
GridField mean_curvature(const FlatHiggsBundle& bundle, const AffineTorus& torus,
                         const MetricField& h);

/// c_1(E, h) = tr Omega, a scalar (1,1) field (the Higgs commutator is
/// traceless, so the Higgs term drops out).
PQField first_chern_form(const FlatHiggsBundle& bundle, const AffineTorus& torus,
                         const MetricField& h);

/// deg_g E = int_M c_1(E,h) ^ omega^{n-1} / nu.
double degree(const FlatHiggsBundle& bundle, const AffineTorus& torus,
              const MetricField& h);

double slope(const FlatHiggsBundle& bundle, const AffineTorus& torus,
             const MetricField& h);

/// gamma = n mu_g(E) / int_M omega^n/nu (computed with h = identity).
double einstein_factor(const FlatHiggsBundle& bundle, const AffineTorus& torus);

/// gamma from a given slope and volume; gamma * volume = n * mu.
double einstein_factor_from(int dim, double mu, double volume);

/// int_M (2r c_2(E) - (r-1) c_1(E)^2) ^ omega^{n-2} / nu for an
/// astheno-Kaehler metric; nonnegative for semistable bundles.
double bogomolov_integral(const FlatHiggsBundle& bundle, const AffineTorus& torus,
                          const MetricField& h, double astheno_tol = 1e-8);

/// The Chern-Weil integrand of the Bogomolov inequality evaluated on a given
/// extended curvature; exposed so the sign convention can be pinned against
/// model curvature data.
double bogomolov_density_integral(const AffineTorus& torus,
                                  const CurvatureBundle& curv, int rank);

}  // namespace ymh
