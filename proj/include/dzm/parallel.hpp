#pragma once

// Data-parallel inner loops. Every kernel exists twice with the same
// signature: dzm::par (OpenMP) and dzm::serial (plain loops, kept as the
// reference the parallel versions are tested and benchmarked against).
//
// Reductions in dzm::par are taken over fixed-size blocks whose partial sums
// are combined in block order, so results do not depend on the thread count.

#include <cstdint>
#include <functional>
#include <random>
#include <span>

#include "dzm/algebra.hpp"
#include "dzm/field.hpp"
#include "dzm/multiplier.hpp"

namespace dzm {

using KernelFn = std::function<Matrix4(const Vec3& x, const Vec3& y)>;
using WeightFn = std::function<double(const Vec3& x)>;

/// Sum and sum of squares of Monte-Carlo samples.
struct SampleMoments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;
};

/// Relative offsets and volume fractions of grid cells meeting a ball.
struct BallStencil {
  std::vector<std::array<int, 3>> offsets;
  std::vector<double> weights;
};

/// Samples per Monte-Carlo batch; each batch draws from its own seeded stream.
inline constexpr std::uint64_t kMonteCarloBatch = 1 << 15;

/// Seed of batch b in the stream identified by seed.
std::uint64_t batch_seed(std::uint64_t seed, std::uint64_t batch);

// apply_multiplier:   multiply each raw-DFT mode by the symbol at its wavevector.
// apply_potential:    out[i] = q[i] f[i].
// weighted_sum_sq:    sum_i w(x_i)^2 |f_i|^2 h^3.
// lattice_kernel_sum: sum_i c(|y_i - x0|) k(x0, y_i) g_i h^3 over grid points y_i != x0.
// ball_power_max:     max over centres of sum_stencil weight * abs_pow (periodic wrap).
// monte_carlo:        moments of sample(rng) over seeded batches of kMonteCarloBatch draws.

namespace par {
void apply_multiplier(std::span<Spinor4> spectrum, const Grid& grid, const Multiplier& m);
void apply_potential(std::span<const Matrix4> q, std::span<const Spinor4> f, std::span<Spinor4> out);
double weighted_sum_sq(std::span<const Spinor4> f, const Grid& grid, const WeightFn& w);
Spinor4 lattice_kernel_sum(std::span<const Spinor4> g, const Grid& grid, const Vec3& x0, const KernelFn& k,
                           const std::function<double(double)>& cutoff);
double ball_power_max(std::span<const double> abs_pow, const Grid& grid, const BallStencil& st);
SampleMoments monte_carlo(std::uint64_t samples, std::uint64_t seed,
                          const std::function<double(std::mt19937_64&)>& sample);

/// Threads used by dzm::par kernels; capped by DZM_THREADS when set.
int thread_count();
void set_thread_count(int n);
}  // namespace par

namespace serial {
void apply_multiplier(std::span<Spinor4> spectrum, const Grid& grid, const Multiplier& m);
void apply_potential(std::span<const Matrix4> q, std::span<const Spinor4> f, std::span<Spinor4> out);
double weighted_sum_sq(std::span<const Spinor4> f, const Grid& grid, const WeightFn& w);
Spinor4 lattice_kernel_sum(std::span<const Spinor4> g, const Grid& grid, const Vec3& x0, const KernelFn& k,
                           const std::function<double(double)>& cutoff);
double ball_power_max(std::span<const double> abs_pow, const Grid& grid, const BallStencil& st);
SampleMoments monte_carlo(std::uint64_t samples, std::uint64_t seed,
                          const std::function<double(std::mt19937_64&)>& sample);
}  // namespace serial

}  // namespace dzm
