#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ymh/errors.hpp"
#include "ymh/grid.hpp"

namespace ymh {

/// Flat Higgs bundle (E, nabla, phi) over the torus, given by commuting
/// monodromy matrices rho_k around the lattice loops and constant commuting,
/// monodromy-equivariant Higgs matrices phi_i (phi = sum_i phi_i (x) dz^i in
/// the locally constant frame).
///
/// All grid fields with values in End E are stored in the periodic gauge
/// W(x) = exp(sum_k x^k L_k), L_k the principal logarithms of rho_k; in this
/// gauge the flat connection has the constant matrix sum_k L_k dx^k and the
/// phi_i stay constant.
class FlatHiggsBundle {
 public:
  int rank() const { return rank_; }
  int dim() const { return static_cast<int>(monodromy_.size()); }
  const std::vector<Eigen::MatrixXcd>& monodromy() const { return monodromy_; }
  const std::vector<Eigen::MatrixXcd>& higgs() const { return higgs_; }
  const std::vector<Eigen::MatrixXcd>& logs() const { return logs_; }

  bool monodromy_is_trivial() const;

  /// Bypasses validation; for diagnostics and failure-injection tests only.
  static FlatHiggsBundle unchecked(int rank,
                                   std::vector<Eigen::MatrixXcd> monodromy,
                                   std::vector<Eigen::MatrixXcd> higgs,
                                   std::vector<Eigen::MatrixXcd> logs);

 private:
  friend FlatHiggsBundle make_bundle(int, const std::vector<Eigen::MatrixXcd>&,
                                     const std::vector<Eigen::MatrixXcd>&);
  FlatHiggsBundle() = default;

  int rank_ = 0;
  std::vector<Eigen::MatrixXcd> monodromy_;
  std::vector<Eigen::MatrixXcd> higgs_;
  std::vector<Eigen::MatrixXcd> logs_;
};

/// Validates and builds a bundle: commuting monodromy, commuting and
/// equivariant Higgs matrices, principal logarithms with exp(L_k) = rho_k.
FlatHiggsBundle make_bundle(int rank, const std::vector<Eigen::MatrixXcd>& monodromy,
                            const std::vector<Eigen::MatrixXcd>& higgs);

/// Norm of the curvature of nabla_t = nabla + t phi assembled from the stored
/// data: || t d^nabla(phi) + t^2 phi ^ phi ||, which vanishes for every valid
/// bundle and every t.
double family_curvature_defect(const FlatHiggsBundle& bundle, double t);

/// Induced bundle End E of rank r^2 with monodromy Ad(rho_k) and Higgs field
/// ad(phi_i) = [phi_i, .].
FlatHiggsBundle endo_bundle(const FlatHiggsBundle& bundle);

struct SimplicityReport {
  bool simple = false;
  int commutant_dim = 0;
  Eigen::MatrixXcd witness;  // non-scalar commutant element when not simple
};

/// Computes the joint commutant of {rho_k, phi_i}; simple iff it is the
/// scalars.
SimplicityReport is_simple(const FlatHiggsBundle& bundle);

}  // namespace ymh
