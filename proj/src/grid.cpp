#include "ymh/grid.hpp"

namespace ymh {

GridField matmul(const GridField& a, const GridField& b) {
  if (a.shape() != b.shape()) fail(ErrorCode::RankMismatch, "grid shape mismatch in matmul");
  if (a.rows() == b.rows()) {
    GridField out(a.shape(), a.rows());
    for (std::int64_t i = 0; i < a.points(); ++i) out.mat(i) = a.mat(i) * b.mat(i);
    return out;
  }
  if (a.rows() == 1) {
    GridField out = b;
    for (std::int64_t i = 0; i < b.points(); ++i) out.values().col(i) *= a.values()(0, i);
    return out;
  }
  if (b.rows() == 1) {
    GridField out = a;
    for (std::int64_t i = 0; i < a.points(); ++i) out.values().col(i) *= b.values()(0, i);
    return out;
  }
  fail(ErrorCode::RankMismatch, "incompatible value ranks in matmul");
}

GridField GridField::adjointwise() const {
  GridField out(shape_, rows_);
  for (std::int64_t i = 0; i < points(); ++i) out.mat(i) = mat(i).adjoint();
  return out;
}

GridField GridField::inversewise() const {
  GridField out(shape_, rows_);
  for (std::int64_t i = 0; i < points(); ++i) out.mat(i) = mat(i).inverse();
  return out;
}

GridField GridField::tracewise() const {
  GridField out(shape_, 1);
  for (std::int64_t i = 0; i < points(); ++i) out.values()(0, i) = mat(i).trace();
  return out;
}

double GridField::sup_norm() const {
  double m = 0;
  for (std::int64_t i = 0; i < points(); ++i) m = std::max(m, values_.col(i).norm());
  return m;
}

double GridField::sup_abs() const { return values_.cwiseAbs().maxCoeff(); }

Complex GridField::grid_mean_trace() const {
  Complex s = 0;
  for (std::int64_t i = 0; i < points(); ++i) s += mat(i).trace();
  return s / static_cast<double>(points());
}

Eigen::MatrixXcd GridField::mean() const {
  Eigen::VectorXcd v = values_.rowwise().mean();
  return Eigen::Map<const Eigen::MatrixXcd>(v.data(), rows_, rows_);
}

double dot_real(const GridField& a, const GridField& b) {
  return a.values().cwiseProduct(b.values().conjugate()).sum().real();
}

GridField identity_field(GridShape shape, int rows) {
  return GridField::constant(shape, Eigen::MatrixXcd::Identity(rows, rows));
}

}  // namespace ymh
