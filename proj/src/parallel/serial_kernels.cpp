#include <algorithm>

#include "dzm/parallel.hpp"

namespace dzm::serial {

void apply_multiplier(std::span<Spinor4> spectrum, const Grid& grid, const Multiplier& m) {
  for (std::size_t idx = 0; idx < spectrum.size(); ++idx) {
    const Vec3 xi = grid.wavevector(idx);
    spectrum[idx] = apply_symbol(m.at(xi, idx == 0), xi, spectrum[idx]);
  }
}

void apply_potential(std::span<const Matrix4> q, std::span<const Spinor4> f, std::span<Spinor4> out) {
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = q[i] * f[i];
}

double weighted_sum_sq(std::span<const Spinor4> f, const Grid& grid, const WeightFn& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double wi = w(grid.point(i));
    s += wi * wi * f[i].norm_sq();
  }
  return s * grid.cell_volume();
}

Spinor4 lattice_kernel_sum(std::span<const Spinor4> g, const Grid& grid, const Vec3& x0, const KernelFn& k,
                           const std::function<double(double)>& cutoff) {
  Spinor4 s;
  const double tiny = 1e-12 * grid.spacing();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 y = grid.point(i);
    const double d = norm(y - x0);
    if (d < tiny) continue;
    const double c = cutoff(d);
    if (c == 0.0) continue;
    s += c * (k(x0, y) * g[i]);
  }
  return grid.cell_volume() * s;
}

double ball_power_max(std::span<const double> abs_pow, const Grid& grid, const BallStencil& st) {
  const int n = grid.n();
  double best = 0.0;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const int i = static_cast<int>(c % n), j = static_cast<int>((c / n) % n), k = static_cast<int>(c / (n * n));
    double s = 0.0;
    for (std::size_t o = 0; o < st.offsets.size(); ++o) {
      const auto& off = st.offsets[o];
      s += st.weights[o] * abs_pow[grid.index(((i + off[0]) % n + n) % n, ((j + off[1]) % n + n) % n,
                                              ((k + off[2]) % n + n) % n)];
    }
    best = std::max(best, s);
  }
  return best;
}

SampleMoments monte_carlo(std::uint64_t samples, std::uint64_t seed,
                          const std::function<double(std::mt19937_64&)>& sample) {
  SampleMoments m;
  for (std::uint64_t lo = 0, b = 0; lo < samples; lo += kMonteCarloBatch, ++b) {
    std::mt19937_64 rng(batch_seed(seed, b));
    const std::uint64_t count = std::min(kMonteCarloBatch, samples - lo);
    for (std::uint64_t s = 0; s < count; ++s) {
      const double v = sample(rng);
      m.sum += v;
      m.sum_sq += v * v;
    }
    m.count += count;
  }
  return m;
}

}  // namespace dzm::serial
