#include "ymh/random_fields.hpp"

#include <random>

#include "ymh/matfun.hpp"

namespace ymh {

namespace {

// Enumerates integer mode vectors with |j|_inf <= max_mode and adds
// coef(j) * exp(2 pi i j.x) + conj to keep values Hermitian/real.
template <typename CoefFn>
void accumulate_modes(GridField& out, int max_mode, double decay, CoefFn&& coef) {
  const GridShape& shape = out.shape();
  const int n = shape.dim;
  // per-axis phase tables exp(2 pi i j t / N)
  std::vector<std::vector<Eigen::VectorXcd>> table(n);
  for (int k = 0; k < n; ++k) {
    table[k].resize(2 * max_mode + 1);
    for (int j = -max_mode; j <= max_mode; ++j) {
      Eigen::VectorXcd v(shape.extent);
      for (int t = 0; t < shape.extent; ++t)
        v[t] = std::exp(Complex(0, 2.0 * M_PI * j * t / shape.extent));
      table[k][j + max_mode] = v;
    }
  }
  std::vector<int> j(n, -max_mode);
  while (true) {
    double jnorm = 0;
    for (int k = 0; k < n; ++k) jnorm += static_cast<double>(j[k]) * j[k];
    jnorm = std::sqrt(jnorm);
    Eigen::MatrixXcd c = coef(j) * std::exp(-decay * jnorm);
    Eigen::MatrixXcd cadj = c.adjoint();
    Eigen::Map<const Eigen::VectorXcd> cv(c.data(), c.size());
    Eigen::Map<const Eigen::VectorXcd> cav(cadj.data(), cadj.size());
    for (std::int64_t x = 0; x < shape.points(); ++x) {
      Complex e = 1.0;
      for (int k = 0; k < n; ++k)
        e *= table[k][j[k] + max_mode][shape.node(x, k)];
      out.values().col(x) += e * cv + std::conj(e) * cav;
    }
    int k = 0;
    while (k < n && ++j[k] > max_mode) j[k++] = -max_mode;
    if (k == n) break;
  }
}

Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, int rank, double amp) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd m(rank, rank);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) m(i, j) = amp * Complex(g(rng), g(rng));
  return m;
}

}  // namespace

GridField random_smooth_scalar(GridShape shape, std::uint64_t seed,
                               const SmoothSpec& spec) {
  std::mt19937_64 rng(seed);
  GridField out(shape, 1);
  accumulate_modes(out, spec.max_mode, spec.decay, [&](const std::vector<int>&) {
    return random_matrix(rng, 1, 0.5 * spec.amplitude);
  });
  return out;
}

GridField random_smooth_matrix(GridShape shape, int rank, std::uint64_t seed,
                               const SmoothSpec& spec) {
  std::mt19937_64 rng(seed);
  GridField out(shape, rank);
  GridField re(shape, rank), im(shape, rank);
  accumulate_modes(re, spec.max_mode, spec.decay, [&](const std::vector<int>&) {
    return random_matrix(rng, rank, 0.5 * spec.amplitude);
  });
  accumulate_modes(im, spec.max_mode, spec.decay, [&](const std::vector<int>&) {
    return random_matrix(rng, rank, 0.5 * spec.amplitude);
  });
  out.values() = re.values() + Complex(0, 1) * im.values();
  return out;
}

GridField random_smooth_hermitian(GridShape shape, int rank, std::uint64_t seed,
                                  const SmoothSpec& spec) {
  std::mt19937_64 rng(seed);
  GridField out(shape, rank);
  accumulate_modes(out, spec.max_mode, spec.decay, [&](const std::vector<int>&) {
    return random_matrix(rng, rank, 0.5 * spec.amplitude);
  });
  return out;  // c e + c^dagger conj(e) is Hermitian pointwise
}

GridField random_smooth_spd(GridShape shape, int rank, std::uint64_t seed,
                            const SmoothSpec& spec) {
  GridField s = random_smooth_hermitian(shape, rank, seed, spec);
  GridField out(shape, rank);
  for (std::int64_t x = 0; x < shape.points(); ++x)
    out.mat(x) = hermitian_exp(s.mat(x));
  return out;
}

PQField random_smooth_pq(GridShape shape, int p, int q, int rank,
                         std::uint64_t seed, const SmoothSpec& spec) {
  PQField out(shape, p, q, rank);
  std::uint64_t s = seed;
  for (int iI = 0; iI < out.slots_i(); ++iI)
    for (int iJ = 0; iJ < out.slots_j(); ++iJ)
      out.coeff(iI, iJ) = random_smooth_matrix(shape, rank, ++s, spec);
  return out;
}

}  // namespace ymh
