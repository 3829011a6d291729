#include "ymh/solver.hpp"

#include <cmath>
#include <sstream>

#include "ymh/fourier.hpp"
#include "ymh/krylov.hpp"
#include "ymh/matfun.hpp"
#include "ymh/stability.hpp"

namespace ymh {

namespace {

Eigen::VectorXcd flatten(const GridField& f) {
  return Eigen::Map<const Eigen::VectorXcd>(f.values().data(), f.values().size());
}

GridField unflatten(const Eigen::VectorXcd& v, const GridShape& shape, int rows) {
  GridField f(shape, rows);
  f.values() = Eigen::Map<const Eigen::MatrixXcd>(v.data(), rows * rows,
                                                  shape.points());
  return f;
}

GridField hermitian_sqrt_field(const GridField& h, double exponent) {
  GridField out(h.shape(), h.rows());
  for (std::int64_t x = 0; x < h.points(); ++x)
    out.mat(x) = hermitian_power(h.mat(x), exponent);
  return out;
}

double sup_frobenius(const GridField& f) { return f.sup_norm(); }

}  // namespace

void SolverOptions::validate() const {
  if (!(eps_start > 0) || !(eps_min > 0) || eps_min > eps_start ||
      !(eps_ratio > 0) || eps_ratio >= 1.0)
    fail(ErrorCode::ConfigError, "eps schedule must be strictly decreasing in (0,1]");
  if (!(newton_tol > 0) || newton_max_iter < 1 || !(blowup_threshold > 0))
    fail(ErrorCode::ConfigError, "solver tolerances must be positive");
}

const char* solver_status_name(SolverStatus s) {
  switch (s) {
    case SolverStatus::converged: return "converged";
    case SolverStatus::blowup: return "blowup";
    case SolverStatus::stalled: return "stalled";
  }
  return "stalled";
}

MetricField normalize_background(const FlatHiggsBundle& bundle,
                                 const AffineTorus& torus,
                                 const MetricField& h_init) {
  const int r = bundle.rank();
  const GridShape& shape = torus.shape();
  const double gamma = einstein_factor(bundle, torus);

  GridField k = mean_curvature(bundle, torus, h_init);
  GridField rhs(shape, 1);
  for (std::int64_t x = 0; x < rhs.points(); ++x)
    rhs.values()(0, x) = k.mat(x).trace().real() - r * gamma;

  GridField u(shape, 1);
  if (rhs.sup_abs() > 1e-14) {
    const Eigen::MatrixXd& ginv = torus.metric_inverse_mean();
    auto precond_field = [&](const GridField& rf) {
      return apply_mode_multiplier(rf, [&](const std::vector<int>& j) -> Complex {
        double quad = 0;
        bool zero = true;
        for (int k1 = 0; k1 < shape.dim; ++k1) {
          if (j[k1] != 0) zero = false;
          for (int k2 = 0; k2 < shape.dim; ++k2)
            quad += ginv(k1, k2) * j[k1] * j[k2];
        }
        if (zero) return 0.0;
        return -1.0 / (M_PI * M_PI * r * quad);
      });
    };
    auto op = [&](const Eigen::VectorXcd& v) {
      GridField uf = unflatten(v, shape, 1);
      uf.values().array() -= uf.values().mean();  // zero-mean gauge
      GridField out = Complex(r) * contract_g(torus, del(dbar(as_pq(uf))));
      return flatten(out);
    };
    auto pc = [&](const Eigen::VectorXcd& v) {
      return flatten(precond_field(unflatten(v, shape, 1)));
    };
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(shape.points());
    KrylovResult kr = gmres(op, pc, flatten(rhs), x, 400, 1e-13, 80);
    (void)kr;
    u = unflatten(x, shape, 1);
    u.values().array() -= u.values().mean();
    u.values() = u.values().real().cast<Complex>();
  }

  GridField h0(shape, r);
  for (std::int64_t x = 0; x < h0.points(); ++x)
    h0.mat(x) = std::exp(u.values()(0, x).real()) * h_init.field().mat(x);
  MetricField out(h0, h_init.eigenvalue_floor());

  GridField k0 = mean_curvature(bundle, torus, out);
  double defect = 0;
  for (std::int64_t x = 0; x < k0.points(); ++x)
    defect = std::max(defect, std::abs(k0.mat(x).trace().real() - r * gamma));
  if (defect > 1e-8)
    fail(ErrorCode::UnsolvableNormalization,
         "normalization residual " + std::to_string(defect));
  return out;
}

XiOperator::XiOperator(const FlatHiggsBundle& bundle, const AffineTorus& torus,
                       const MetricField& h0, GridField f, double eps)
    : bundle_(bundle), torus_(torus), h0_(h0), f_(std::move(f)), eps_(eps) {
  const GridShape& shape = torus.shape();
  h0_sqrt_ = hermitian_sqrt_field(h0.field(), 0.5);
  h0_isqrt_ = hermitian_sqrt_field(h0.field(), -0.5);

  // positivity of f with respect to h0
  for (std::int64_t x = 0; x < f_.points(); ++x) {
    Eigen::MatrixXcd s = h0_sqrt_.mat(x) * f_.mat(x) * h0_isqrt_.mat(x);
    if (min_eigenvalue(0.5 * (s + s.adjoint())) <= h0.eigenvalue_floor())
      fail(ErrorCode::NotPositive, "f has an eigenvalue at or below the floor");
  }
  f_inv_ = f_.inversewise();

  a0_ = extended_connection_form(bundle, torus, h0);
  phi_ = higgs_form(bundle, shape);
  phi_star0_ = higgs_adjoint(bundle, h0);

  // del_0 f and [phi*, f]
  del0_f_ = PQField(shape, 1, 0, bundle.rank());
  for (int k = 0; k < torus.dim(); ++k) {
    GridField d = spectral_derivative(f_, k);
    d *= Complex(0.5);
    d += matmul(a0_.coeff(k, 0), f_) - matmul(f_, a0_.coeff(k, 0));
    del0_f_.coeff(k, 0) = d;
  }
  comm_star_f_ = PQField(shape, 0, 1, bundle.rank());
  for (int j = 0; j < torus.dim(); ++j)
    comm_star_f_.coeff(0, j) =
        matmul(phi_star0_.coeff(0, j), f_) - matmul(f_, phi_star0_.coeff(0, j));

  // L_eps(f)
  PQField chi = del0_f_;
  for (int k = 0; k < torus.dim(); ++k)
    chi.coeff(k, 0) = matmul(f_inv_, del0_f_.coeff(k, 0));
  GridField t1 = contract_g(torus_, dbar_flat(bundle_, chi));

  PQField xi = comm_star_f_;
  for (int j = 0; j < torus.dim(); ++j)
    xi.coeff(0, j) = matmul(f_inv_, comm_star_f_.coeff(0, j));
  GridField t2 = contract_g(torus_, graded_comm(phi_, xi));

  GridField logf(shape, bundle.rank());
  for (std::int64_t x = 0; x < logf.points(); ++x) {
    Eigen::MatrixXcd s = h0_sqrt_.mat(x) * f_.mat(x) * h0_isqrt_.mat(x);
    logf.mat(x) = h0_isqrt_.mat(x) * hermitian_log(0.5 * (s + s.adjoint())) *
                  h0_sqrt_.mat(x);
  }

  double gamma = einstein_factor(bundle_, torus_);
  l_of_f_ = mean_curvature(bundle_, torus_, h0_);
  l_of_f_ -= GridField::constant(
      shape, gamma * Eigen::MatrixXcd::Identity(bundle.rank(), bundle.rank()));
  l_of_f_ += t1;
  l_of_f_ += t2;
  l_of_f_ += Complex(eps_) * logf;
}

GridField XiOperator::apply(const GridField& eta) const {
  const GridShape& shape = torus_.shape();
  const int n = torus_.dim();

  // d chi = f^{-1} del_0 eta - f^{-1} eta f^{-1} del_0 f
  PQField dchi(shape, 1, 0, bundle_.rank());
  GridField finv_eta = matmul(f_inv_, eta);
  for (int k = 0; k < n; ++k) {
    GridField d = spectral_derivative(eta, k);
    d *= Complex(0.5);
    d += matmul(a0_.coeff(k, 0), eta) - matmul(eta, a0_.coeff(k, 0));
    dchi.coeff(k, 0) =
        matmul(f_inv_, d) - matmul(finv_eta, matmul(f_inv_, del0_f_.coeff(k, 0)));
  }
  GridField dt1 = contract_g(torus_, dbar_flat(bundle_, dchi));

  PQField dxi(shape, 0, 1, bundle_.rank());
  for (int j = 0; j < n; ++j) {
    GridField dz =
        matmul(phi_star0_.coeff(0, j), eta) - matmul(eta, phi_star0_.coeff(0, j));
    dxi.coeff(0, j) =
        matmul(f_inv_, dz) - matmul(finv_eta, matmul(f_inv_, comm_star_f_.coeff(0, j)));
  }
  GridField dt2 = contract_g(torus_, graded_comm(phi_, dxi));

  GridField dlog(shape, bundle_.rank());
  if (eps_ != 0.0) {
    for (std::int64_t x = 0; x < dlog.points(); ++x) {
      Eigen::MatrixXcd s = h0_sqrt_.mat(x) * f_.mat(x) * h0_isqrt_.mat(x);
      Eigen::MatrixXcd es = h0_sqrt_.mat(x) * eta.mat(x) * h0_isqrt_.mat(x);
      dlog.mat(x) = h0_isqrt_.mat(x) *
                    hermitian_dlog(0.5 * (s + s.adjoint()), es) * h0_sqrt_.mat(x);
    }
  }

  GridField dl = dt1 + dt2;
  if (eps_ != 0.0) dl += Complex(eps_) * dlog;
  return matmul(eta, l_of_f_) + matmul(f_, dl);
}

namespace {

struct Workspace {
  const FlatHiggsBundle& bundle;
  const AffineTorus& torus;
  MetricField h0;
  GridField h0_sqrt, h0_isqrt;
  SolverOptions opts;
  double gamma = 0;

  Workspace(const FlatHiggsBundle& b, const AffineTorus& t, MetricField h,
            const SolverOptions& o)
      : bundle(b), torus(t), h0(std::move(h)), opts(o) {
    h0_sqrt = hermitian_sqrt_field(h0.field(), 0.5);
    h0_isqrt = hermitian_sqrt_field(h0.field(), -0.5);
    gamma = einstein_factor(b, t);
  }

  Eigen::MatrixXcd standard_rep(const GridField& f, std::int64_t x) const {
    Eigen::MatrixXcd s = h0_sqrt.mat(x) * f.mat(x) * h0_isqrt.mat(x);
    return 0.5 * (s + s.adjoint());
  }

  double m_of(const GridField& f) const {
    double m = 0;
    for (std::int64_t x = 0; x < f.points(); ++x)
      m = std::max(m, hermitian_log(standard_rep(f, x)).norm());
    return m;
  }

  double det_defect(const GridField& f) const {
    double d = 0;
    for (std::int64_t x = 0; x < f.points(); ++x)
      d = std::max(d, std::abs(standard_rep(f, x).determinant() - 1.0));
    return d;
  }

  void renormalize_det(GridField& f) const {
    const double r = bundle.rank();
    for (std::int64_t x = 0; x < f.points(); ++x) {
      double det = standard_rep(f, x).determinant().real();
      f.values().col(x) /= std::pow(det, 1.0 / r);
    }
  }

  GridField symmetrize(const GridField& eta) const {
    GridField out(eta.shape(), eta.rows());
    GridField h0inv = h0.field().inversewise();
    for (std::int64_t x = 0; x < eta.points(); ++x) {
      Eigen::MatrixXcd adj =
          h0inv.mat(x) * eta.mat(x).adjoint() * h0.field().mat(x);
      out.mat(x) = 0.5 * (eta.mat(x) + adj);
    }
    return out;
  }

  bool positive(const GridField& f) const {
    for (std::int64_t x = 0; x < f.points(); ++x)
      if (min_eigenvalue(standard_rep(f, x)) <= opts.eigenvalue_floor)
        return false;
    return true;
  }

  /// |int tr eta_hat omega^n/nu| for the successive-difference proxy.
  double eta_trace_integral(const GridField& f_new, const GridField& f_old,
                            double deps) const {
    GridField scalar(f_new.shape(), 1);
    for (std::int64_t x = 0; x < f_new.points(); ++x) {
      Eigen::MatrixXcd fo = standard_rep(f_old, x);
      Eigen::MatrixXcd fn = standard_rep(f_new, x);
      scalar.values()(0, x) = (fo.inverse() * (fn - fo)).trace() / deps;
    }
    PQField wn = wedge_power(omega_form(torus), torus.dim());
    return std::abs(integrate(torus, wedge(as_pq(scalar), wn)));
  }
};

enum class NewtonOutcome { converged, failed, blowup };

/// Mode-block preconditioner: grid-averaged algebraic part of Xi plus the
/// spectral flat Laplacian, one dense r^2 x r^2 solve per Fourier mode.
class ModeBlockPreconditioner {
 public:
  ModeBlockPreconditioner(const XiOperator& xi, const GridShape& shape, int rank,
                          const Eigen::MatrixXd& ginv_mean)
      : shape_(shape), rank_(rank) {
    const int rr = rank * rank;
    Eigen::MatrixXcd tbar(rr, rr);
    for (int b = 0; b < rank; ++b) {
      for (int a = 0; a < rank; ++a) {
        Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(rank, rank);
        e(a, b) = 1.0;
        GridField col = xi.apply(GridField::constant(shape, e));
        Eigen::MatrixXcd m = col.mean();
        tbar.col(a + b * rank) = Eigen::Map<const Eigen::VectorXcd>(m.data(), rr);
      }
    }
    double ridge = 1e-10 * std::max(1.0, tbar.norm());
    lus_.reserve(shape.points());
    std::vector<int> j(shape.dim);
    for (std::int64_t idx = 0; idx < shape.points(); ++idx) {
      double quad = 0;
      for (int k1 = 0; k1 < shape.dim; ++k1) {
        j[k1] = signed_mode(shape, idx, k1);
      }
      for (int k1 = 0; k1 < shape.dim; ++k1)
        for (int k2 = 0; k2 < shape.dim; ++k2)
          quad += ginv_mean(k1, k2) * j[k1] * j[k2];
      Eigen::MatrixXcd m =
          tbar + (M_PI * M_PI * quad + ridge) * Eigen::MatrixXcd::Identity(rr, rr);
      lus_.emplace_back(m);
    }
  }

  GridField apply(const GridField& rhs) const {
    GridField out = rhs;
    fft_all_axes(out, true);
    for (std::int64_t idx = 0; idx < out.points(); ++idx)
      out.values().col(idx) = lus_[idx].solve(out.values().col(idx).eval());
    fft_all_axes(out, false);
    return out;
  }

 private:
  GridShape shape_;
  int rank_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>> lus_;
};

NewtonOutcome newton_solve(const Workspace& ws, double eps, GridField& f,
                           int& iters, double& residual_out,
                           std::string* diag = nullptr) {
  GridField g = f;
  iters = 0;
  for (int it = 0; it <= ws.opts.newton_max_iter; ++it) {
    XiOperator xi(ws.bundle, ws.torus, ws.h0, g, eps);
    double res = sup_frobenius(xi.residual_l());
    residual_out = res;
    if (res <= ws.opts.newton_tol) {
      f = g;
      iters = it;
      return NewtonOutcome::converged;
    }
    if (ws.m_of(g) > ws.opts.blowup_threshold) {
      f = g;
      iters = it;
      return NewtonOutcome::blowup;
    }
    if (it == ws.opts.newton_max_iter) break;

    ModeBlockPreconditioner pc(xi, ws.torus.shape(), ws.bundle.rank(),
                               ws.torus.metric_inverse_mean());
    GridField rhs = matmul(g, xi.residual_l());
    rhs *= Complex(-1.0);
    auto apply = [&](const Eigen::VectorXcd& v) {
      return flatten(
          xi.apply(unflatten(v, ws.torus.shape(), ws.bundle.rank())));
    };
    auto precond = [&](const Eigen::VectorXcd& v) {
      return flatten(pc.apply(unflatten(v, ws.torus.shape(), ws.bundle.rank())));
    };
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(rhs.values().size());
    gmres(apply, precond, flatten(rhs), x, ws.opts.gmres_max_iter,
          ws.opts.gmres_rel_tol, 60);
    GridField delta =
        ws.symmetrize(unflatten(x, ws.torus.shape(), ws.bundle.rank()));

    bool accepted = false;
    double t = 1.0;
    for (int bt = 0; bt < 14; ++bt, t *= 0.5) {
      GridField trial = g + Complex(t) * delta;
      trial = ws.symmetrize(trial);
      if (!ws.positive(trial)) continue;
      double res_trial;
      try {
        XiOperator probe(ws.bundle, ws.torus, ws.h0, trial, eps);
        res_trial = sup_frobenius(probe.residual_l());
      } catch (const Error&) {
        continue;
      }
      if (res_trial < res * (1.0 - 1e-4 * t) || res_trial <= ws.opts.newton_tol) {
        g = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (diag) *diag = "newton line search failed at eps " + std::to_string(eps);
      return NewtonOutcome::failed;
    }
  }
  if (diag) *diag = "newton iteration limit at eps " + std::to_string(eps);
  return NewtonOutcome::failed;
}

}  // namespace

GridField residual_L_eps(const FlatHiggsBundle& bundle, const AffineTorus& torus,
                         const MetricField& h0, const GridField& f, double eps) {
  XiOperator xi(bundle, torus, h0, f, eps);
  return xi.residual_l();
}

SolverTrace continuity_solve(const FlatHiggsBundle& bundle,
                             const AffineTorus& torus, const SolverOptions& opts,
                             const MetricField* h_init) {
  opts.validate();
  MetricField hi = h_init ? *h_init
                          : MetricField::identity(torus.shape(), bundle.rank());
  MetricField h0 = normalize_background(bundle, torus, hi);
  Workspace ws(bundle, torus, h0, opts);

  SolverTrace trace;
  trace.h0 = h0.field();
  trace.gamma = ws.gamma;

  std::vector<double> schedule;
  for (double e = opts.eps_start; e > opts.eps_min * (1.0 + 1e-12);
       e *= opts.eps_ratio)
    schedule.push_back(e);
  schedule.push_back(opts.eps_min);

  GridField f = identity_field(torus.shape(), bundle.rank());
  GridField f_prev_raw = f;
  GridField f_raw = f;
  double prev_eps = 0;
  bool have_prev = false;
  bool blowup = false;

  // trailing-slope extrapolation of m_eps to eps -> 0: a family diverging
  // like m ~ c log(1/eps) has no bounded limit; the first eps at which the
  // extrapolation crosses the threshold is recorded, but the schedule runs to
  // its end so the final iterate is as degenerate as possible for
  // destabilizer extraction
  auto extrapolate_m = [&]() -> double {
    const auto& s = trace.steps;
    int w = std::min<int>(opts.slope_window, static_cast<int>(s.size()) - 1);
    if (w < 1) return s.empty() ? 0.0 : s.back().m_eps;
    const SolverStep& last = s.back();
    const SolverStep& first = s[s.size() - 1 - w];
    double slope_fit = (last.m_eps - first.m_eps) /
                       std::max(1e-12, std::log(first.eps / last.eps));
    slope_fit = std::max(0.0, slope_fit);
    return last.m_eps + slope_fit * std::log(last.eps / 1e-16);
  };

  for (double target : schedule) {
    // sub-stepping between the last accepted eps and the target
    std::vector<double> stack{target};
    while (!stack.empty() && !blowup) {
      double eps = stack.back();
      GridField candidate = f;
      int iters = 0;
      double res = 0;
      NewtonOutcome outcome =
          newton_solve(ws, eps, candidate, iters, res, &trace.diagnostics);
      if (outcome == NewtonOutcome::failed) {
        if (!have_prev) {
          trace.status = SolverStatus::stalled;
          trace.diagnostics += "; no solution at eps_start";
          return trace;
        }
        double mid = std::sqrt(prev_eps * eps);
        if ((mid - eps) / eps < 1e-3) {
          trace.status = SolverStatus::stalled;
          return trace;
        }
        stack.push_back(mid);
        continue;
      }

      double m = ws.m_of(candidate);
      if (outcome == NewtonOutcome::blowup) {
        // the iterate crossed the threshold before reaching the tolerance;
        // keep the last accepted solutions for extraction
        blowup = true;
        trace.blowup_eps = eps;
        break;
      }

      double det_defect = ws.det_defect(candidate);
      trace.steps.push_back({eps, iters, res, m, det_defect});
      if (have_prev)
        trace.eta_trace_integrals.push_back(
            ws.eta_trace_integral(candidate, f_raw, eps - prev_eps));

      f_prev_raw = f_raw;
      f_raw = candidate;
      trace.eps_prev = prev_eps;
      prev_eps = eps;
      have_prev = true;
      trace.final_residual = res;

      if (m > opts.blowup_threshold) {
        blowup = true;
        if (trace.blowup_eps == 0.0) trace.blowup_eps = eps;
        f = candidate;
        break;
      }
      trace.m_extrapolated = extrapolate_m();
      if (trace.m_extrapolated > opts.blowup_threshold && trace.blowup_eps == 0.0)
        trace.blowup_eps = eps;
      if (opts.det_renormalize) ws.renormalize_det(candidate);
      f = candidate;
      stack.pop_back();
    }
    if (blowup) break;
  }

  trace.f = f;
  trace.f_prev = f_prev_raw;

  if (blowup) {
    trace.status = SolverStatus::blowup;
    trace.m_extrapolated = std::max(trace.m_extrapolated,
                                    trace.steps.empty() ? 0.0
                                                        : trace.steps.back().m_eps);
    return trace;
  }

  // classification at the end of the schedule uses the final trailing window,
  // so an early growth transient on a converging run is forgiven
  trace.m_extrapolated = extrapolate_m();
  if (trace.m_extrapolated > opts.blowup_threshold) {
    trace.status = SolverStatus::blowup;
    if (trace.blowup_eps == 0.0) trace.blowup_eps = trace.steps.back().eps;
    return trace;
  }
  trace.blowup_eps = 0.0;  // any early flag was a transient

  // final solve at eps = 0
  GridField f0 = f;
  int iters = 0;
  double res = 0;
  NewtonOutcome outcome = newton_solve(ws, 0.0, f0, iters, res, &trace.diagnostics);
  if (outcome == NewtonOutcome::blowup) {
    trace.status = SolverStatus::blowup;
    trace.blowup_eps = 0.0;
    return trace;
  }
  if (outcome == NewtonOutcome::failed) {
    trace.status = SolverStatus::stalled;
    return trace;
  }
  trace.f_prev = trace.f;
  trace.f = f0;
  trace.final_residual = res;
  trace.steps.push_back({0.0, iters, res, ws.m_of(f0), ws.det_defect(f0)});

  // independent mean-curvature check through the metric H0 f
  GridField hf = matmul(h0.field(), f0);
  for (std::int64_t x = 0; x < hf.points(); ++x) {
    Eigen::MatrixXcd m = hf.mat(x);
    hf.mat(x) = 0.5 * (m + m.adjoint());
  }
  GridField k = mean_curvature(bundle, torus, MetricField(hf, 0.0));
  k -= GridField::constant(torus.shape(),
                           ws.gamma * Eigen::MatrixXcd::Identity(bundle.rank(),
                                                                 bundle.rank()));
  trace.kh_residual = sup_frobenius(k);
  trace.status = (trace.kh_residual < 10.0 * opts.newton_tol)
                     ? SolverStatus::converged
                     : SolverStatus::stalled;
  if (trace.status == SolverStatus::stalled)
    trace.diagnostics += "; mean-curvature check failed after eps = 0 solve";
  return trace;
}

DestabilizerReport extract_destabilizer(const FlatHiggsBundle& bundle,
                                        const AffineTorus& torus,
                                        const SolverTrace& trace,
                                        const std::vector<double>& sigma_schedule,
                                        double identity_tol, double gap) {
  if (trace.status != SolverStatus::blowup)
    fail(ErrorCode::ConfigError, "destabilizer extraction needs a blow-up trace");
  if (sigma_schedule.size() < 2)
    fail(ErrorCode::ConfigError, "sigma schedule needs at least two values");
  const int r = bundle.rank();
  const GridShape& shape = torus.shape();
  MetricField h0(trace.h0, 0.0);
  Workspace ws(bundle, torus, h0, SolverOptions{});

  // rho_eps = exp(-M_eps), f_hat = rho f
  double m_top = -1e300;
  for (std::int64_t x = 0; x < trace.f.points(); ++x) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ws.standard_rep(trace.f, x),
                                                       Eigen::EigenvaluesOnly);
    m_top = std::max(m_top, std::log(es.eigenvalues().maxCoeff()));
  }
  const double rho = std::exp(-m_top);

  // sigma-power limit, eigenvalue-wise linear Richardson extrapolation from
  // the two largest sigma values, then threshold at 1/2 with the gap
  const double s1 = sigma_schedule[0], s2 = sigma_schedule[1];
  GridField pi_std(shape, r);
  for (std::int64_t x = 0; x < pi_std.points(); ++x) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ws.standard_rep(trace.f, x));
    Eigen::VectorXd survive(r);
    for (int i = 0; i < r; ++i) {
      double mu = rho * es.eigenvalues()[i];
      double v1 = std::pow(mu, s1), v2 = std::pow(mu, s2);
      double limit = (s1 * v2 - s2 * v1) / (s1 - s2);
      if (limit >= 0.5 + gap)
        survive[i] = 1.0;
      else if (limit <= 0.5 - gap)
        survive[i] = 0.0;
      else
        fail(ErrorCode::NoSpectralGap,
             "extrapolated eigenvalue " + std::to_string(limit) +
                 " not separated from 1/2");
    }
    Eigen::VectorXcd keep(r);
    for (int i = 0; i < r; ++i) keep[i] = 1.0 - survive[i];
    pi_std.mat(x) =
        es.eigenvectors() * keep.asDiagonal() * es.eigenvectors().adjoint();
  }

  DestabilizerReport report;
  report.projector = GridField(shape, r);
  for (std::int64_t x = 0; x < pi_std.points(); ++x)
    report.projector.mat(x) =
        ws.h0_isqrt.mat(x) * pi_std.mat(x) * ws.h0_sqrt.mat(x);

  // projection and invariance identities, integrated against omega^n/nu
  const GridField& pi = report.projector;
  PQField wn = wedge_power(omega_form(torus), torus.dim());
  double volume = integrate(torus, wn);
  auto integrated_norm = [&](const GridField& g) {
    GridField scalar(shape, 1);
    for (std::int64_t x = 0; x < g.points(); ++x)
      scalar.values()(0, x) = g.mat(x).norm();
    return integrate(torus, wedge(as_pq(scalar), wn)) / volume;
  };

  report.idempotent_residual = integrated_norm(matmul(pi, pi) - pi);
  report.selfadjoint_residual = integrated_norm(ws.symmetrize(pi) - pi);

  PQField dbar_pi = dbar_flat(bundle, as_pq(pi));
  GridField dbar_res(shape, 1);
  for (std::int64_t x = 0; x < pi.points(); ++x) {
    Eigen::MatrixXcd compl_proj =
        Eigen::MatrixXcd::Identity(r, r) - pi.mat(x);
    double total = 0;
    for (int j = 0; j < torus.dim(); ++j)
      total += (compl_proj * dbar_pi.coeff(0, j).mat(x)).norm();
    dbar_res.values()(0, x) = total;
  }
  report.dbar_residual =
      integrate(torus, wedge(as_pq(dbar_res), wn)) / volume;

  GridField higgs_res(shape, 1);
  for (std::int64_t x = 0; x < pi.points(); ++x) {
    Eigen::MatrixXcd compl_proj =
        Eigen::MatrixXcd::Identity(r, r) - pi.mat(x);
    double total = 0;
    for (int i = 0; i < torus.dim(); ++i)
      total += (compl_proj * bundle.higgs()[i] * pi.mat(x)).norm();
    higgs_res.values()(0, x) = total;
  }
  report.higgs_residual =
      integrate(torus, wedge(as_pq(higgs_res), wn)) / volume;

  if (report.idempotent_residual > identity_tol ||
      report.selfadjoint_residual > identity_tol ||
      report.dbar_residual > identity_tol ||
      report.higgs_residual > identity_tol)
    fail(ErrorCode::NotInvariant, "projection identities exceed tolerance");

  // constant basis by averaging the projector
  Eigen::MatrixXcd pbar_std = pi_std.mean();
  pbar_std = 0.5 * (pbar_std + pbar_std.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pbar_std);
  int s = 0;
  for (int i = 0; i < r; ++i)
    if (es.eigenvalues()[i] > 0.5) ++s;
  if (s == 0 || s == r)
    fail(ErrorCode::NoSpectralGap, "averaged projector is not proper");
  Eigen::MatrixXcd basis_std = es.eigenvectors().rightCols(s);
  // map back from the standard representation and orthonormalize
  Eigen::MatrixXcd basis(r, s);
  for (int c = 0; c < s; ++c) {
    // h0 is constant on all blow-up corpus runs; use its grid mean
    Eigen::MatrixXcd isqrt = hermitian_power(ws.h0.field().mean(), -0.5);
    basis.col(c) = isqrt * basis_std.col(c);
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
  basis = qr.householderQ() * Eigen::MatrixXcd::Identity(r, s);

  report.basis = basis;
  report.rank = s;

  std::vector<Eigen::MatrixXcd> gens = bundle.monodromy();
  gens.insert(gens.end(), bundle.higgs().begin(), bundle.higgs().end());
  Eigen::MatrixXcd proj_c = Eigen::MatrixXcd::Identity(r, r) - basis * basis.adjoint();
  for (const auto& g : gens)
    report.basis_invariance = std::max(
        report.basis_invariance, (proj_c * g * basis).norm() / std::max(1.0, g.norm()));
  if (report.basis_invariance > 1e-6)
    fail(ErrorCode::NotInvariant, "averaged destabilizer basis is not invariant");

  FlatHiggsBundle sub = restrict_bundle(bundle, basis, 1e-6);
  report.mu_F = slope(sub, torus, MetricField::identity(shape, s));
  report.mu_E = slope(bundle, torus, MetricField::identity(shape, r));
  return report;
}

}  // namespace ymh
