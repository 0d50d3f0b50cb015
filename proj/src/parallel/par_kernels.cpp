#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

#include "dzm/parallel.hpp"

namespace dzm::par {

namespace {

constexpr std::size_t kBlock = 4096;

int initial_threads() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("DZM_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0) n = std::min(n, cap);
    } catch (const std::exception&) {
      // unparseable value: keep the OpenMP default
    }
  }
  return std::max(1, n);
}

int& threads() {
  static int t = initial_threads();
  return t;
}

}  // namespace

int thread_count() { return threads(); }
void set_thread_count(int n) { threads() = std::max(1, n); }

void apply_multiplier(std::span<Spinor4> spectrum, const Grid& grid, const Multiplier& m) {
  const int n = grid.n();
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (int k = 0; k < n; ++k) {
    const double xk = grid.frequency(k);
    for (int j = 0; j < n; ++j) {
      const double xj = grid.frequency(j);
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = grid.index(i, j, k);
        const Vec3 xi{grid.frequency(i), xj, xk};
        spectrum[idx] = apply_symbol(m.at(xi, idx == 0), xi, spectrum[idx]);
      }
    }
  }
}

void apply_potential(std::span<const Matrix4> q, std::span<const Spinor4> f, std::span<Spinor4> out) {
  const std::ptrdiff_t size = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (std::ptrdiff_t i = 0; i < size; ++i) out[i] = q[i] * f[i];
}

double weighted_sum_sq(std::span<const Spinor4> f, const Grid& grid, const WeightFn& w) {
  const std::size_t nblocks = (f.size() + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
    const std::size_t lo = b * kBlock, hi = std::min(f.size(), lo + kBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double wi = w(grid.point(i));
      s += wi * wi * f[i].norm_sq();
    }
    partial[b] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total * grid.cell_volume();
}

Spinor4 lattice_kernel_sum(std::span<const Spinor4> g, const Grid& grid, const Vec3& x0, const KernelFn& k,
                           const std::function<double(double)>& cutoff) {
  const std::size_t nblocks = (g.size() + kBlock - 1) / kBlock;
  std::vector<Spinor4> partial(nblocks);
  const double tiny = 1e-12 * grid.spacing();
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
    const std::size_t lo = b * kBlock, hi = std::min(g.size(), lo + kBlock);
    Spinor4 s;
    for (std::size_t i = lo; i < hi; ++i) {
      const Vec3 y = grid.point(i);
      const double d = norm(y - x0);
      if (d < tiny) continue;
      const double c = cutoff(d);
      if (c == 0.0) continue;
      s += c * (k(x0, y) * g[i]);
    }
    partial[b] = s;
  }
  Spinor4 total;
  for (const auto& p : partial) total += p;
  return grid.cell_volume() * total;
}

double ball_power_max(std::span<const double> abs_pow, const Grid& grid, const BallStencil& st) {
  const int n = grid.n();
  double best = 0.0;
#pragma omp parallel for schedule(static) reduction(max : best) num_threads(thread_count())
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t o = 0; o < st.offsets.size(); ++o) {
          const auto& off = st.offsets[o];
          const int ii = ((i + off[0]) % n + n) % n;
          const int jj = ((j + off[1]) % n + n) % n;
          const int kk = ((k + off[2]) % n + n) % n;
          s += st.weights[o] * abs_pow[grid.index(ii, jj, kk)];
        }
        best = std::max(best, s);
      }
  return best;
}

SampleMoments monte_carlo(std::uint64_t samples, std::uint64_t seed,
                          const std::function<double(std::mt19937_64&)>& sample) {
  const std::uint64_t nbatches = (samples + kMonteCarloBatch - 1) / kMonteCarloBatch;
  std::vector<SampleMoments> partial(nbatches);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nbatches); ++b) {
    std::mt19937_64 rng(batch_seed(seed, static_cast<std::uint64_t>(b)));
    const std::uint64_t lo = b * kMonteCarloBatch;
    const std::uint64_t count = std::min(kMonteCarloBatch, samples - lo);
    SampleMoments m;
    for (std::uint64_t s = 0; s < count; ++s) {
      const double v = sample(rng);
      m.sum += v;
      m.sum_sq += v * v;
    }
    m.count = count;
    partial[b] = m;
  }
  SampleMoments total;
  for (const auto& p : partial) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
    total.count += p.count;
  }
  return total;
}

}  // namespace dzm::par
