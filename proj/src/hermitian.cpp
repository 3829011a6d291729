#include "ymh/hermitian.hpp"

#include "ymh/fourier.hpp"
#include "ymh/matfun.hpp"

namespace ymh {

MetricField::MetricField(GridField h, double eigenvalue_floor)
    : field_(std::move(h)), floor_(eigenvalue_floor) {
  for (std::int64_t x = 0; x < field_.points(); ++x) {
    Eigen::MatrixXcd m = field_.mat(x);
    double scale = std::max(1.0, m.norm());
    if ((m - m.adjoint()).norm() > 1e-10 * scale)
      fail(ErrorCode::NotPositive, "metric matrix not Hermitian at a grid point");
    if (min_eigenvalue(m) < floor_)
      fail(ErrorCode::NotPositive,
           "metric eigenvalue below the configured floor");
  }
}

MetricField MetricField::identity(GridShape shape, int rank) {
  return MetricField(identity_field(shape, rank));
}

PQField higgs_form(const FlatHiggsBundle& bundle, GridShape shape) {
  PQField out(shape, 1, 0, bundle.rank());
  for (int i = 0; i < bundle.dim(); ++i)
    out.coeff(i, 0) = GridField::constant(shape, bundle.higgs()[i]);
  return out;
}

PQField higgs_adjoint(const FlatHiggsBundle& bundle, const MetricField& h) {
  if (h.rank() != bundle.rank()) fail(ErrorCode::RankMismatch, "higgs_adjoint");
  const GridShape& shape = h.shape();
  PQField out(shape, 0, 1, bundle.rank());
  GridField hinv = h.field().inversewise();
  for (int i = 0; i < bundle.dim(); ++i) {
    GridField& c = out.coeff(0, i);
    c = GridField(shape, bundle.rank());
    for (std::int64_t x = 0; x < c.points(); ++x)
      c.mat(x) = hinv.mat(x) * bundle.higgs()[i].adjoint() * h.field().mat(x);
  }
  return out;
}

PQField extended_connection_form(const FlatHiggsBundle& bundle,
                                 const AffineTorus& torus, const MetricField& h) {
  if (h.rank() != bundle.rank())
    fail(ErrorCode::RankMismatch, "extended_connection_form");
  const GridShape& shape = torus.shape();
  const int n = torus.dim();
  PQField out(shape, 1, 0, bundle.rank());
  GridField hinv = h.field().inversewise();
  for (int k = 0; k < n; ++k) {
    GridField dh = spectral_derivative(h.field(), k);
    GridField& c = out.coeff(k, 0);
    const Eigen::MatrixXcd Lk_adj = bundle.logs()[k].adjoint();
    for (std::int64_t x = 0; x < c.points(); ++x)
      c.mat(x) = 0.5 * (hinv.mat(x) * dh.mat(x) -
                        hinv.mat(x) * Lk_adj * h.field().mat(x));
  }
  return out;
}

PQField flat_connection_form_01(const FlatHiggsBundle& bundle, GridShape shape) {
  PQField out(shape, 0, 1, bundle.rank());
  for (int k = 0; k < bundle.dim(); ++k)
    out.coeff(0, k) = GridField::constant(shape, 0.5 * bundle.logs()[k]);
  return out;
}

PQField graded_comm(const PQField& beta, const PQField& a) {
  PQField out = wedge(beta, a);
  PQField swapped = wedge(a, beta);
  if ((a.p() + a.q()) % 2 == 0)
    out -= swapped;
  else
    out += swapped;
  return out;
}

PQField del_h(const FlatHiggsBundle& bundle, const AffineTorus& torus,
              const MetricField& h, const PQField& a) {
  PQField A = extended_connection_form(bundle, torus, h);
  return del(a) + graded_comm(A, a);
}

PQField dbar_flat(const FlatHiggsBundle& bundle, const PQField& a) {
  PQField B = flat_connection_form_01(bundle, a.shape());
  return dbar(a) + graded_comm(B, a);
}

PQField del_flat(const FlatHiggsBundle& bundle, const PQField& a) {
  PQField alpha(a.shape(), 1, 0, bundle.rank());
  for (int k = 0; k < bundle.dim(); ++k)
    alpha.coeff(k, 0) = GridField::constant(a.shape(), 0.5 * bundle.logs()[k]);
  return del(a) + graded_comm(alpha, a);
}

CurvatureBundle extended_curvature(const FlatHiggsBundle& bundle,
                                   const AffineTorus& torus,
                                   const MetricField& h) {
  if (h.rank() != bundle.rank()) fail(ErrorCode::RankMismatch, "extended_curvature");
  const GridShape& shape = torus.shape();
  PQField A = extended_connection_form(bundle, torus, h);
  PQField B = flat_connection_form_01(bundle, shape);
  PQField phi = higgs_form(bundle, shape);
  PQField phi_star = higgs_adjoint(bundle, h);

  CurvatureBundle curv;
  curv.part11 = dbar(A) + del(B) + wedge(A, B) + wedge(B, A) +
                wedge(phi, phi_star) + wedge(phi_star, phi);
  curv.part20 = del(phi) + wedge(A, phi) + wedge(phi, A);
  curv.part02 = dbar(phi_star) + wedge(B, phi_star) + wedge(phi_star, B);
  return curv;
}

GridField mean_curvature(const FlatHiggsBundle& bundle, const AffineTorus& torus,
                         const MetricField& h) {
  return contract_g(torus, extended_curvature(bundle, torus, h).part11);
}

PQField first_chern_form(const FlatHiggsBundle& bundle, const AffineTorus& torus,
                         const MetricField& h) {
  return trace_fiber(extended_curvature(bundle, torus, h).part11);
}

double degree(const FlatHiggsBundle& bundle, const AffineTorus& torus,
              const MetricField& h) {
  PQField c1 = first_chern_form(bundle, torus, h);
  PQField wn1 = wedge_power(omega_form(torus), torus.dim() - 1);
  return integrate(torus, wedge(c1, wn1));
}

double slope(const FlatHiggsBundle& bundle, const AffineTorus& torus,
             const MetricField& h) {
  return degree(bundle, torus, h) / bundle.rank();
}

double einstein_factor_from(int dim, double mu, double volume) {
  if (volume <= 0.0)
    fail(ErrorCode::ZeroVolume, "int omega^n / nu is not positive");
  return dim * mu / volume;
}

double einstein_factor(const FlatHiggsBundle& bundle, const AffineTorus& torus) {
  MetricField h = MetricField::identity(torus.shape(), bundle.rank());
  double mu = slope(bundle, torus, h);
  double volume = integrate(torus, wedge_power(omega_form(torus), torus.dim()));
  return einstein_factor_from(torus.dim(), mu, volume);
}

double bogomolov_density_integral(const AffineTorus& torus,
                                  const CurvatureBundle& curv, int rank) {
  PQField tr20 = trace_fiber(curv.part20);
  PQField tr11 = trace_fiber(curv.part11);
  PQField tr02 = trace_fiber(curv.part02);

  // (2,2) part of 2r c_2 - (r-1) c_1^2 = c_1 ^ c_1 - r tr(Omega ^ Omega);
  // with these conventions the density integrates nonnegative for
  // Yang-Mills-Higgs metrics (pinned by a unit test on a model curvature).
  PQField c1c1 = wedge(tr11, tr11) + wedge(tr20, tr02) + wedge(tr02, tr20);
  PQField trOO = trace_fiber(wedge(curv.part11, curv.part11) +
                             wedge(curv.part20, curv.part02) +
                             wedge(curv.part02, curv.part20));
  PQField density = c1c1 - Complex(static_cast<double>(rank)) * trOO;

  PQField wn2 = wedge_power(omega_form(torus), torus.dim() - 2);
  return integrate(torus, wedge(density, wn2));
}

double bogomolov_integral(const FlatHiggsBundle& bundle, const AffineTorus& torus,
                          const MetricField& h, double astheno_tol) {
  const int n = torus.dim();
  if (n < 2) fail(ErrorCode::DegreeMismatch, "bogomolov_integral needs dim >= 2");
  double defect = astheno_defect(torus);
  if (defect > astheno_tol)
    fail(ErrorCode::NotAstheno, "metric is not astheno-Kaehler (defect " +
                                    std::to_string(defect) + ")");
  CurvatureBundle curv = extended_curvature(bundle, torus, h);
  return bogomolov_density_integral(torus, curv, bundle.rank());
}

}  // namespace ymh
