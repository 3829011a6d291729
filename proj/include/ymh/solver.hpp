#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ymh/bundle.hpp"
#include "ymh/calculus.hpp"
#include "ymh/geometry.hpp"
#include "ymh/hermitian.hpp"

namespace ymh {

struct SolverOptions {
  double eps_start = 1.0;
  double eps_min = 1e-4;
  double eps_ratio = 0.5;           // geometric schedule
  double newton_tol = 1e-10;        // residual sup norm
  int newton_max_iter = 50;
  double blowup_threshold = 12.0;   // on m_eps = max |log f|
  bool det_renormalize = true;
  int slope_window = 4;             // trailing steps in the m-growth fit
  int gmres_max_iter = 500;
  double gmres_rel_tol = 1e-3;
  double eigenvalue_floor = 1e-10;

  void validate() const;
};

enum class SolverStatus { converged, blowup, stalled };

const char* solver_status_name(SolverStatus s);

struct SolverStep {
  double eps = 0;
  int newton_iters = 0;
  double residual = 0;    // ||L_eps(f)||_inf at the accepted solution
  double m_eps = 0;       // max_M |log f|
  double det_defect = 0;  // max_M |det f - 1| before renormalization
};

struct SolverTrace {
  SolverStatus status = SolverStatus::stalled;
  std::vector<SolverStep> steps;
  GridField f;        // last accepted solution (h0-self-adjoint, positive)
  GridField f_prev;   // previous accepted solution
  double eps_prev = 0;
  GridField h0;       // normalized background metric
  double gamma = 0;
  double final_residual = 0;  // ||L(f)||_inf at the final accepted step
  double kh_residual = 0;     // ||K^phi[H0 f] - gamma id||_inf, assembled from
                              // the metric H0 f directly
  double m_extrapolated = 0;  // trailing-slope extrapolation of m to eps -> 0
  double blowup_eps = 0;      // eps at which blow-up was detected (0 = endgame)
  std::vector<double> eta_trace_integrals;  // |int tr eta_hat| between steps
  std::string diagnostics;
};

/// Returns h0 = e^u h_init with tr K_0^phi = r gamma: u solves the linear
/// equation tr_g del dbar (r u) = tr K^phi[h_init] - r gamma spectrally (in
/// the zero-mean gauge).
MetricField normalize_background(const FlatHiggsBundle& bundle,
                                 const AffineTorus& torus,
                                 const MetricField& h_init);

/// L_eps(f) = K_0^phi - gamma id + tr_g dbar(f^{-1} del_0 f)
///          + tr_g [phi, f^{-1}[phi*, f]] + eps log f,
/// for f positive and self-adjoint with respect to h0.
GridField residual_L_eps(const FlatHiggsBundle& bundle, const AffineTorus& torus,
                         const MetricField& h0, const GridField& f, double eps);

/// Apply-only linearization Xi = d/df [f L_eps(f)] on h0-self-adjoint
/// endomorphism fields.
class XiOperator {
 public:
  XiOperator(const FlatHiggsBundle& bundle, const AffineTorus& torus,
             const MetricField& h0, GridField f, double eps);

  GridField apply(const GridField& eta) const;
  const GridField& residual_l() const { return l_of_f_; }

 private:
  const FlatHiggsBundle& bundle_;
  const AffineTorus& torus_;
  const MetricField& h0_;
  GridField f_, f_inv_;
  GridField h0_sqrt_, h0_isqrt_;
  double eps_;
  GridField l_of_f_;     // L_eps(f)
  PQField a0_;           // extended connection form of h0
  PQField phi_, phi_star0_;
  PQField del0_f_;       // del_0 f
  PQField comm_star_f_;  // [phi*, f]
};

/// Continuity method: normalize the background, solve L_eps(f) = 0 down the
/// eps schedule with warm-started Newton-Krylov, monitor m_eps and det f, and
/// finish with an eps = 0 solve or report blow-up.
SolverTrace continuity_solve(const FlatHiggsBundle& bundle,
                             const AffineTorus& torus,
                             const SolverOptions& opts = {},
                             const MetricField* h_init = nullptr);

struct DestabilizerReport {
  GridField projector;      // pi, h0-orthogonal projection field onto F
  Eigen::MatrixXcd basis;   // constant orthonormal basis of F
  int rank = 0;
  double mu_F = 0;
  double mu_E = 0;
  double idempotent_residual = 0;   // ||pi^2 - pi||       (integrated)
  double selfadjoint_residual = 0;  // ||pi* - pi||        (integrated)
  double dbar_residual = 0;         // ||(1 - pi) dbar pi||(integrated)
  double higgs_residual = 0;        // ||(1 - pi) phi pi|| (integrated)
  double basis_invariance = 0;
};

/// Rescales the final blow-up iterate by the reciprocal largest eigenvalue,
/// takes sigma-powers down the schedule, extrapolates the eigenvalues to
/// sigma -> 0, thresholds them to {0,1}, and returns pi = id - limit together
/// with the projection identities and the destabilizing subspace.
DestabilizerReport extract_destabilizer(
    const FlatHiggsBundle& bundle, const AffineTorus& torus,
    const SolverTrace& trace,
    const std::vector<double>& sigma_schedule = {0.5, 0.25, 0.1, 0.05},
    double identity_tol = 1e-2, double gap = 0.2);

}  // namespace ymh
