#include "ymh/matfun.hpp"

namespace ymh {

Eigen::MatrixXcd hermitian_dlog(const Eigen::MatrixXcd& f, const Eigen::MatrixXcd& eta) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(f);
  const Eigen::VectorXd lam = es.eigenvalues();
  const Eigen::MatrixXcd& u = es.eigenvectors();
  Eigen::MatrixXcd tilde = u.adjoint() * eta * u;
  const int r = static_cast<int>(lam.size());
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) {
      double la = lam[a], lb = lam[b];
      double g;
      if (std::abs(la - lb) <= 1e-9 * std::max(std::abs(la), std::abs(lb)))
        g = 2.0 / (la + lb);
      else
        g = (std::log(la) - std::log(lb)) / (la - lb);
      tilde(a, b) *= g;
    }
  }
  return u * tilde * u.adjoint();
}

Eigen::MatrixXcd principal_log(const Eigen::MatrixXcd& a, double tol) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);
  double scale = a.norm();
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    Complex lam = es.eigenvalues()[i];
    if (lam.real() <= 0.0 && std::abs(lam.imag()) <= tol * std::max(1.0, scale))
      fail(ErrorCode::NoPrincipalLog,
           "matrix has an eigenvalue on the closed negative real axis");
  }
  return a.log();
}

}  // namespace ymh
