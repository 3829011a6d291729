#include "ymh/geometry.hpp"

#include "ymh/calculus.hpp"
#include "ymh/matfun.hpp"

namespace ymh {

namespace {

void validate_metric(const GridShape& shape, const GridField& metric) {
  if (metric.rows() != shape.dim || metric.shape() != shape)
    fail(ErrorCode::NonSPDMetric, "metric field has wrong shape");
  for (std::int64_t x = 0; x < metric.points(); ++x) {
    Eigen::MatrixXcd g = metric.mat(x);
    double scale = std::max(1.0, g.norm());
    if ((g - g.transpose()).norm() > 1e-10 * scale ||
        g.imag().norm() > 1e-10 * scale)
      fail(ErrorCode::NonSPDMetric, "metric not real symmetric at a grid point");
    if (min_eigenvalue(g) <= 0.0)
      fail(ErrorCode::NonSPDMetric, "metric not positive definite at a grid point");
  }
}

}  // namespace

AffineTorus::AffineTorus(GridShape shape, GridField metric, double nu)
    : shape_(shape), nu_(nu), metric_(std::move(metric)) {
  if (shape.dim < 1) fail(ErrorCode::BadGrid, "dimension must be >= 1");
  if (shape.extent < 4 || shape.extent % 2 != 0)
    fail(ErrorCode::BadGrid, "grid resolution must be even and >= 4");
  if (!(nu > 0.0)) fail(ErrorCode::NonSPDMetric, "nu must be positive");
  validate_metric(shape_, metric_);
  metric_inv_ = metric_.inversewise();
  ginv_mean_ = metric_inv_.mean().real();
  metric_constant_ =
      (metric_.values().colwise() - metric_.values().col(0)).cwiseAbs().maxCoeff() == 0.0;
}

AffineTorus make_torus(int dim, int grid, const GridField& metric, double nu) {
  return AffineTorus(GridShape{dim, grid}, metric, nu);
}

AffineTorus make_torus(int dim, int grid, const Eigen::MatrixXd& constant_metric,
                       double nu) {
  GridShape shape{dim, grid};
  if (dim < 1) fail(ErrorCode::BadGrid, "dimension must be >= 1");
  if (constant_metric.rows() != dim || constant_metric.cols() != dim)
    fail(ErrorCode::NonSPDMetric, "constant metric has wrong size");
  return AffineTorus(shape,
                     GridField::constant(shape, constant_metric.cast<Complex>()),
                     nu);
}

PQField omega_form(const AffineTorus& torus) {
  const int n = torus.dim();
  PQField w(torus.shape(), 1, 1, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      w.coeff(i, j).values().row(0) = torus.metric().values().row(i + j * n);
  return w;
}

double integrate(const AffineTorus& torus, const PQField& chi,
                 const Conventions& conventions) {
  const int n = torus.dim();
  if (chi.p() != n || chi.q() != n)
    fail(ErrorCode::DegreeMismatch, "integrate needs an (n,n) field");
  if (chi.rank() != 1)
    fail(ErrorCode::DegreeMismatch, "integrate needs a scalar-valued field");
  int sign = ((n * (n - 1) / 2) % 2 == 0) ? 1 : -1;
  if (conventions.flip_division) sign = -sign;
  Complex mean = chi.coeff(0, 0).values().row(0).mean();
  return sign * mean.real() / torus.nu();
}

double integrate(const AffineTorus& torus, const PQField& chi) {
  return integrate(torus, chi, Conventions{});
}

double gauduchon_defect(const AffineTorus& torus) {
  PQField w = wedge_power(omega_form(torus), torus.dim() - 1);
  return del(dbar(w)).sup_abs();
}

double astheno_defect(const AffineTorus& torus) {
  if (torus.dim() < 2)
    fail(ErrorCode::DegreeMismatch, "astheno_defect needs dim >= 2");
  PQField w = wedge_power(omega_form(torus), torus.dim() - 2);
  return del(dbar(w)).sup_abs();
}

}  // namespace ymh
