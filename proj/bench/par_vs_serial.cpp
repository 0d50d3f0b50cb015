// dzm::par against dzm::serial on the inner loops. Threads follow DZM_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "dzm/kernels.hpp"
#include "dzm/parallel.hpp"

namespace {

using namespace dzm;

SpinorField random_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  SpinorField f(g);
  for (auto& s : f.values)
    for (int c = 0; c < 4; ++c) s[c] = {nd(rng), nd(rng)};
  return f;
}

Multiplier inverse_dirac() {
  Multiplier m;
  m.symbol = [](const Vec3& xi) { return SymbolValue{0.0, 1.0 / dot(xi, xi)}; };
  return m;
}

BallStencil cube_ball(int radius) {
  BallStencil st;
  for (int k = -radius; k <= radius; ++k)
    for (int j = -radius; j <= radius; ++j)
      for (int i = -radius; i <= radius; ++i)
        if (i * i + j * j + k * k <= radius * radius) {
          st.offsets.push_back({i, j, k});
          st.weights.push_back(1.0);
        }
  return st;
}

template <bool Par>
void BM_apply_multiplier(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)), 8.0);
  SpinorField f = random_field(g, 1);
  const Multiplier m = inverse_dirac();
  for (auto _ : state) {
    if constexpr (Par) par::apply_multiplier(f.values, g, m);
    else serial::apply_multiplier(f.values, g, m);
    benchmark::DoNotOptimize(f.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}

template <bool Par>
void BM_weighted_sum_sq(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)), 8.0);
  const SpinorField f = random_field(g, 2);
  const WeightFn w = [](const Vec3& x) { return std::pow(bracket(x), 1.5); };
  for (auto _ : state) {
    const double v = Par ? par::weighted_sum_sq(f.values, g, w) : serial::weighted_sum_sq(f.values, g, w);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}

template <bool Par>
void BM_lattice_kernel_sum(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)), 8.0);
  const SpinorField f = random_field(g, 3);
  const Vec3 x0{0.1, -0.2, 0.3};
  const KernelFn k = [](const Vec3& x, const Vec3& y) { return a_kernel(x, y); };
  const auto cut = [](double d) { return d > 1.0 ? 1.0 : 0.0; };
  for (auto _ : state) {
    const Spinor4 v = Par ? par::lattice_kernel_sum(f.values, g, x0, k, cut)
                          : serial::lattice_kernel_sum(f.values, g, x0, k, cut);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}

template <bool Par>
void BM_ball_power_max(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)), 8.0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(g.size());
  for (auto& v : a) v = u(rng);
  const BallStencil st = cube_ball(2);
  for (auto _ : state) {
    const double v = Par ? par::ball_power_max(a, g, st) : serial::ball_power_max(a, g, st);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}

template <bool Par>
void BM_monte_carlo(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const auto sample = [](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double x = u(rng);
    return std::exp(-x * x);
  };
  for (auto _ : state) {
    const SampleMoments m = Par ? par::monte_carlo(n, 7, sample) : serial::monte_carlo(n, 7, sample);
    benchmark::DoNotOptimize(m.sum);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

}  // namespace

BENCHMARK(BM_apply_multiplier<false>)->Name("serial/apply_multiplier")->Arg(32)->Arg(64);
BENCHMARK(BM_apply_multiplier<true>)->Name("par/apply_multiplier")->Arg(32)->Arg(64);
BENCHMARK(BM_weighted_sum_sq<false>)->Name("serial/weighted_sum_sq")->Arg(32)->Arg(64);
BENCHMARK(BM_weighted_sum_sq<true>)->Name("par/weighted_sum_sq")->Arg(32)->Arg(64);
BENCHMARK(BM_lattice_kernel_sum<false>)->Name("serial/lattice_kernel_sum")->Arg(32)->Arg(64);
BENCHMARK(BM_lattice_kernel_sum<true>)->Name("par/lattice_kernel_sum")->Arg(32)->Arg(64);
BENCHMARK(BM_ball_power_max<false>)->Name("serial/ball_power_max")->Arg(32)->Arg(64);
BENCHMARK(BM_ball_power_max<true>)->Name("par/ball_power_max")->Arg(32)->Arg(64);
BENCHMARK(BM_monte_carlo<false>)->Name("serial/monte_carlo")->Arg(1 << 20);
BENCHMARK(BM_monte_carlo<true>)->Name("par/monte_carlo")->Arg(1 << 20);

BENCHMARK_MAIN();
