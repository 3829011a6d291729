#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ymh/bundle.hpp"
#include "ymh/geometry.hpp"
#include "ymh/hermitian.hpp"

namespace ymh {

enum class Verdict {
  stable,
  semistable_not_polystable,
  polystable,
  unstable,
  indeterminate,
};

const char* verdict_name(Verdict v);

struct SubspaceWitness {
  Eigen::MatrixXcd basis;  // r x s, orthonormal columns
  int rank = 0;
  double slope = 0;
};

struct StabilityReport {
  Verdict verdict = Verdict::indeterminate;
  double mu_E = 0;
  std::vector<SubspaceWitness> witnesses;
  bool simultaneously_diagonalizable = false;
};

/// Orthonormal bases of proper nonzero subspaces invariant under all rho_k
/// and phi_i: the joint generalized-eigenspace lattice (all direct sums of
/// primary components) together with the minimal invariant subspaces (joint
/// kernels of the shifted generators) inside each primary component.
std::vector<Eigen::MatrixXcd> invariant_subspaces(const FlatHiggsBundle& bundle);

/// Whether all monodromy and Higgs matrices are simultaneously
/// diagonalizable (each generator's geometric multiplicities match the
/// algebraic ones; for a commuting family this is equivalent).
bool simultaneously_diagonalizable(const FlatHiggsBundle& bundle);

/// Restriction of the bundle to an invariant subspace (induced monodromy and
/// Higgs matrices in the given orthonormal basis). Throws NotInvariant if the
/// subspace fails the invariance residual.
FlatHiggsBundle restrict_bundle(const FlatHiggsBundle& bundle,
                                const Eigen::MatrixXcd& basis,
                                double tol = 1e-10);

/// Slope comparison over the enumerated flat phi-invariant subbundles,
/// polystability via simultaneous diagonalizability of the generators.
StabilityReport stability_verdict(const FlatHiggsBundle& bundle,
                                  const AffineTorus& torus,
                                  double slope_tol = 1e-7);

struct SlopeDefectResult {
  double mu_gap = 0;            // mu_g(E) - mu_g(F)
  double a_norm2 = 0;           // int |A|^2 omega^n / nu
  double phi_tilde_norm2 = 0;   // int |phi~|^2 omega^n / nu
  double identity_residual = 0; // |mu_gap - (a_norm2 + phi_tilde_norm2)/(s n)|
};

/// Second-fundamental-form decomposition of the slope gap for an invariant
/// subspace F under a metric h: mu(F) = mu(E) - (|A|^2 + |phi~|^2)/(s n).
/// When `check_identity` is set (the metric is certified Yang-Mills-Higgs),
/// a violation of the identity beyond `identity_tol` throws.
SlopeDefectResult slope_defect(const FlatHiggsBundle& bundle,
                               const AffineTorus& torus, const MetricField& h,
                               const Eigen::MatrixXcd& f_basis,
                               bool check_identity = false,
                               double identity_tol = 1e-6);

}  // namespace ymh
