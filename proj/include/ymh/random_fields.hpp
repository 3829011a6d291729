#pragma once

#include <cstdint>

#include "ymh/calculus.hpp"
#include "ymh/grid.hpp"

namespace ymh {

/// Band-limited random smooth fields: trigonometric polynomials with modes
/// |j|_inf <= max_mode and coefficients damped by exp(-decay * |j|). Keeping
/// max_mode well below the Nyquist mode keeps products of such fields
/// alias-free on the grid.
struct SmoothSpec {
  int max_mode = 3;
  double amplitude = 0.3;
  double decay = 0.7;
};

/// Real scalar field (rank 1).
GridField random_smooth_scalar(GridShape shape, std::uint64_t seed,
                               const SmoothSpec& spec = {});

/// Complex r x r matrix field.
GridField random_smooth_matrix(GridShape shape, int rank, std::uint64_t seed,
                               const SmoothSpec& spec = {});

/// Pointwise Hermitian r x r field.
GridField random_smooth_hermitian(GridShape shape, int rank, std::uint64_t seed,
                                  const SmoothSpec& spec = {});

/// Pointwise Hermitian positive definite field exp(S) with S random Hermitian.
GridField random_smooth_spd(GridShape shape, int rank, std::uint64_t seed,
                            const SmoothSpec& spec = {});

/// Random smooth PQField with matrix values.
PQField random_smooth_pq(GridShape shape, int p, int q, int rank,
                         std::uint64_t seed, const SmoothSpec& spec = {});

}  // namespace ymh
