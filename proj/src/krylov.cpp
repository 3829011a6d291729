#include "ymh/krylov.hpp"

#include <cmath>
#include <complex>

namespace ymh {

using Complex = std::complex<double>;

KrylovResult gmres(const LinearMap& apply, const LinearMap& precond,
                   const Eigen::VectorXcd& b, Eigen::VectorXcd& x, int max_iter,
                   double rel_tol, int restart) {
  using Eigen::VectorXcd;
  KrylovResult result;
  const auto n = b.size();
  if (x.size() != n) x = VectorXcd::Zero(n);

  VectorXcd pb = precond(b);
  const double bnorm = pb.norm();
  if (bnorm == 0.0) {
    x.setZero();
    result.converged = true;
    return result;
  }

  int total_iters = 0;
  while (total_iters < max_iter) {
    VectorXcd r = precond(b - apply(x));
    double beta = r.norm();
    result.rel_residual = beta / bnorm;
    if (result.rel_residual <= rel_tol) {
      result.converged = true;
      break;
    }

    const int m = std::min<int>(restart, max_iter - total_iters);
    Eigen::MatrixXcd v(n, m + 1);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m + 1, m);
    VectorXcd cs = VectorXcd::Zero(m), sn = VectorXcd::Zero(m);
    VectorXcd g = VectorXcd::Zero(m + 1);
    v.col(0) = r / beta;
    g(0) = beta;

    int k = 0;
    for (; k < m; ++k) {
      VectorXcd w = precond(apply(v.col(k)));
      for (int i = 0; i <= k; ++i) {  // modified Gram-Schmidt
        h(i, k) = v.col(i).dot(w);
        w -= h(i, k) * v.col(i);
      }
      h(k + 1, k) = w.norm();
      if (std::abs(h(k + 1, k)) > 1e-300) v.col(k + 1) = w / h(k + 1, k);

      for (int i = 0; i < k; ++i) {  // apply previous Givens rotations
        Complex t = std::conj(cs(i)) * h(i, k) + std::conj(sn(i)) * h(i + 1, k);
        h(i + 1, k) = -sn(i) * h(i, k) + cs(i) * h(i + 1, k);
        h(i, k) = t;
      }
      double denom =
          std::sqrt(std::norm(h(k, k)) + std::norm(h(k + 1, k)));
      if (denom < 1e-300) {
        ++total_iters;
        ++k;
        break;
      }
      cs(k) = h(k, k) / denom;
      sn(k) = h(k + 1, k) / denom;
      h(k, k) = std::conj(cs(k)) * h(k, k) + std::conj(sn(k)) * h(k + 1, k);
      h(k + 1, k) = 0.0;
      g(k + 1) = -sn(k) * g(k);
      g(k) = std::conj(cs(k)) * g(k);
      ++total_iters;

      result.rel_residual = std::abs(g(k + 1)) / bnorm;
      if (result.rel_residual <= rel_tol || total_iters >= max_iter) {
        ++k;
        break;
      }
    }

    // solve the upper triangular system and update x
    VectorXcd y = VectorXcd::Zero(k);
    for (int i = k - 1; i >= 0; --i) {
      Complex s = g(i);
      for (int j = i + 1; j < k; ++j) s -= h(i, j) * y(j);
      y(i) = (std::abs(h(i, i)) > 1e-300) ? s / h(i, i) : Complex(0);
    }
    for (int i = 0; i < k; ++i) x += y(i) * v.col(i);

    if (result.rel_residual <= rel_tol) {
      result.converged = true;
      break;
    }
    if (k == 0) break;
  }
  result.iterations = total_iters;
  return result;
}

}  // namespace ymh
