#pragma once

#include <Eigen/Dense>
#include <functional>

#include "ymh/grid.hpp"

namespace ymh {

/// Spectral (trigonometric) derivative d/dx^axis of every matrix entry of the
/// field. Exact for band-limited data; the Nyquist mode is dropped, as usual
/// for odd-order spectral derivatives on an even grid.
GridField spectral_derivative(const GridField& f, int axis);

/// In-place forward/inverse DFT along every axis (unnormalized forward,
/// 1/N-normalized inverse per axis, matching Eigen::FFT).
void fft_all_axes(GridField& f, bool forward);

/// Signed mode number along `axis` for frequency-space index `idx`, in
/// [-extent/2, extent/2).
int signed_mode(const GridShape& shape, std::int64_t idx, int axis);

/// Applies a scalar multiplier m(j) per Fourier mode j to every matrix entry:
/// f <- IFFT( m(j) * FFT(f) ).
GridField apply_mode_multiplier(
    const GridField& f,
    const std::function<Complex(const std::vector<int>&)>& multiplier);

/// Solves (c0 + tr_g dbar del)(u) = rhs for constant inverse metric `ginv`,
/// i.e. divides mode j by (c0 + pi^2 sum_kl ginv(k,l) j_k j_l). When c0 == 0
/// the zero mode of the solution is set to zero (zero-mean gauge).
GridField spectral_helmholtz_solve(const GridField& rhs, double c0,
                                   const Eigen::MatrixXd& ginv);

}  // namespace ymh
