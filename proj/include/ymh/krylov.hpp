#pragma once

#include <Eigen/Dense>
#include <functional>

namespace ymh {

struct KrylovResult {
  bool converged = false;
  int iterations = 0;
  double rel_residual = 0;
};

using LinearMap = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

/// Restarted GMRES with left preconditioning for the system A x = b; the
/// convergence test is on the preconditioned residual, relative to the
/// preconditioned right-hand side.
KrylovResult gmres(const LinearMap& apply, const LinearMap& precond,
                   const Eigen::VectorXcd& b, Eigen::VectorXcd& x,
                   int max_iter = 500, double rel_tol = 1e-3, int restart = 60);

}  // namespace ymh
