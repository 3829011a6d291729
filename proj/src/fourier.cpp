#include "ymh/fourier.hpp"

#include <unsupported/Eigen/FFT>

namespace ymh {

namespace {

// Applies `transform` to every grid line along `axis`, for every matrix entry
// row of the field. The line is gathered into a contiguous buffer.
template <typename Fn>
void transform_lines(GridField& f, int axis, Fn&& transform) {
  const GridShape& shape = f.shape();
  const int n = shape.extent;
  const std::int64_t stride = shape.stride(axis);
  const std::int64_t npts = shape.points();
  const int nrows = f.rows() * f.rows();
  Eigen::VectorXcd line(n), out(n);
  for (std::int64_t base = 0; base < npts; ++base) {
    if (shape.node(base, axis) != 0) continue;
    for (int row = 0; row < nrows; ++row) {
      for (int t = 0; t < n; ++t) line[t] = f.values()(row, base + t * stride);
      transform(line, out);
      for (int t = 0; t < n; ++t) f.values()(row, base + t * stride) = out[t];
    }
  }
}

}  // namespace

GridField spectral_derivative(const GridField& f, int axis) {
  GridField out = f;
  const int n = f.shape().extent;
  Eigen::FFT<double> fft;
  Eigen::VectorXcd freq(n);
  transform_lines(out, axis, [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& res) {
    fft.fwd(freq, in);
    for (int j = 0; j < n; ++j) {
      int js = (j <= n / 2) ? j : j - n;
      if (js == n / 2) js = 0;
      freq[j] *= Complex(0.0, 2.0 * M_PI * js);
    }
    fft.inv(res, freq);
  });
  return out;
}

void fft_all_axes(GridField& f, bool forward) {
  const int n = f.shape().extent;
  Eigen::FFT<double> fft;
  Eigen::VectorXcd freq(n);
  for (int axis = 0; axis < f.shape().dim; ++axis) {
    transform_lines(f, axis, [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& res) {
      if (forward)
        fft.fwd(res, in);
      else
        fft.inv(res, in);
    });
  }
}

int signed_mode(const GridShape& shape, std::int64_t idx, int axis) {
  int j = shape.node(idx, axis);
  return (j <= shape.extent / 2) ? j : j - shape.extent;
}

GridField apply_mode_multiplier(
    const GridField& f,
    const std::function<Complex(const std::vector<int>&)>& multiplier) {
  GridField out = f;
  fft_all_axes(out, true);
  std::vector<int> mode(f.shape().dim);
  for (std::int64_t idx = 0; idx < out.points(); ++idx) {
    for (int axis = 0; axis < f.shape().dim; ++axis)
      mode[axis] = signed_mode(f.shape(), idx, axis);
    out.values().col(idx) *= multiplier(mode);
  }
  fft_all_axes(out, false);
  return out;
}

GridField spectral_helmholtz_solve(const GridField& rhs, double c0,
                                   const Eigen::MatrixXd& ginv) {
  const int dim = rhs.shape().dim;
  return apply_mode_multiplier(rhs, [&](const std::vector<int>& j) -> Complex {
    double quad = 0;
    for (int k = 0; k < dim; ++k)
      for (int l = 0; l < dim; ++l) quad += ginv(k, l) * j[k] * j[l];
    double denom = c0 + M_PI * M_PI * quad;
    if (denom == 0.0) return 0.0;
    return 1.0 / denom;
  });
}

}  // namespace ymh
