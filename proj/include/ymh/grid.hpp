#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "ymh/errors.hpp"

namespace ymh {

using Complex = std::complex<double>;

/// Uniform periodic grid on the unit torus [0,1)^dim with `extent` points per
/// axis. Point indices are row-major with axis 0 slowest.
struct GridShape {
  int dim = 0;
  int extent = 0;

  std::int64_t points() const {
    std::int64_t n = 1;
    for (int k = 0; k < dim; ++k) n *= extent;
    return n;
  }

  std::int64_t stride(int axis) const {
    std::int64_t s = 1;
    for (int k = axis + 1; k < dim; ++k) s *= extent;
    return s;
  }

  /// Coordinate of grid node `idx` along `axis`, in [0,1).
  double coord(std::int64_t idx, int axis) const {
    return static_cast<double>(node(idx, axis)) / extent;
  }

  int node(std::int64_t idx, int axis) const {
    return static_cast<int>((idx / stride(axis)) % extent);
  }

  bool operator==(const GridShape&) const = default;
};

/// Periodic grid of complex rows x rows matrices. Column j of `values` is the
/// column-major vectorization of the matrix at grid point j, so whole-field
/// linear operations are single Eigen expressions.
class GridField {
 public:
  GridField() = default;
  GridField(GridShape shape, int rows)
      : shape_(shape),
        rows_(rows),
        values_(Eigen::MatrixXcd::Zero(rows * rows, shape.points())) {}

  static GridField constant(GridShape shape, const Eigen::MatrixXcd& m) {
    GridField f(shape, static_cast<int>(m.rows()));
    f.values_.colwise() = Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
    return f;
  }

  const GridShape& shape() const { return shape_; }
  int rows() const { return rows_; }
  std::int64_t points() const { return values_.cols(); }

  Eigen::MatrixXcd& values() { return values_; }
  const Eigen::MatrixXcd& values() const { return values_; }

  Eigen::Map<Eigen::MatrixXcd> mat(std::int64_t idx) {
    return {values_.col(idx).data(), rows_, rows_};
  }
  Eigen::Map<const Eigen::MatrixXcd> mat(std::int64_t idx) const {
    return {values_.col(idx).data(), rows_, rows_};
  }

  void set(std::int64_t idx, const Eigen::MatrixXcd& m) { mat(idx) = m; }

  GridField& operator+=(const GridField& o) {
    values_ += o.values_;
    return *this;
  }
  GridField& operator-=(const GridField& o) {
    values_ -= o.values_;
    return *this;
  }
  GridField& operator*=(Complex c) {
    values_ *= c;
    return *this;
  }

  friend GridField operator+(GridField a, const GridField& b) { return a += b; }
  friend GridField operator-(GridField a, const GridField& b) { return a -= b; }
  friend GridField operator*(Complex c, GridField a) { return a *= c; }

  /// Pointwise matrix product; scalar (1x1) factors broadcast on either side.
  friend GridField matmul(const GridField& a, const GridField& b);

  GridField adjointwise() const;
  GridField inversewise() const;
  GridField tracewise() const;

  double sup_norm() const;       // max over points of Frobenius norm
  double sup_abs() const;        // max over all entries of |entry|
  Complex grid_mean_trace() const;
  Eigen::MatrixXcd mean() const;

  bool all_finite() const { return values_.allFinite(); }

 private:
  GridShape shape_;
  int rows_ = 0;
  Eigen::MatrixXcd values_;
};

/// Real inner product Re sum_x tr(a(x)^dagger b(x)) (unweighted grid sum).
double dot_real(const GridField& a, const GridField& b);

GridField identity_field(GridShape shape, int rows);

}  // namespace ymh
