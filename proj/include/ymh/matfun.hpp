#pragma once

#include <Eigen/Dense>
#include <complex>
#include <unsupported/Eigen/MatrixFunctions>

#include "ymh/errors.hpp"
#include "ymh/grid.hpp"

namespace ymh {

/// f(A) for Hermitian A via eigendecomposition.
template <typename Derived, typename Fn>
Eigen::MatrixXcd hermitian_apply(const Eigen::MatrixBase<Derived>& a, Fn&& f) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  Eigen::VectorXd lam = es.eigenvalues();
  Eigen::VectorXcd flam(lam.size());
  for (int i = 0; i < lam.size(); ++i) flam[i] = f(lam[i]);
  return es.eigenvectors() * flam.asDiagonal() * es.eigenvectors().adjoint();
}

template <typename Derived>
Eigen::MatrixXcd hermitian_log(const Eigen::MatrixBase<Derived>& a) {
  return hermitian_apply(a, [](double x) { return std::log(x); });
}

template <typename Derived>
Eigen::MatrixXcd hermitian_exp(const Eigen::MatrixBase<Derived>& a) {
  return hermitian_apply(a, [](double x) { return std::exp(x); });
}

template <typename Derived>
Eigen::MatrixXcd hermitian_power(const Eigen::MatrixBase<Derived>& a, double sigma) {
  return hermitian_apply(a, [sigma](double x) { return std::pow(x, sigma); });
}

template <typename Derived>
double min_eigenvalue(const Eigen::MatrixBase<Derived>& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.derived(),
                                                      Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Directional derivative of the Hermitian matrix logarithm at f along eta
/// (Daleckii-Krein divided differences in the eigenbasis of f).
Eigen::MatrixXcd hermitian_dlog(const Eigen::MatrixXcd& f, const Eigen::MatrixXcd& eta);

/// Principal logarithm of an invertible matrix. Throws NoPrincipalLog when an
/// eigenvalue lies on the closed negative real axis.
Eigen::MatrixXcd principal_log(const Eigen::MatrixXcd& a, double tol = 1e-12);

}  // namespace ymh
