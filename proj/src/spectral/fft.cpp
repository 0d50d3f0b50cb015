#include "dzm/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

namespace dzm {

namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int howmany, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    const auto key = std::make_tuple(n, howmany, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<cplx> scratch(static_cast<std::size_t>(n) * n * n * howmany);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int dims[3] = {n, n, n};
    fftw_plan p = fftw_plan_many_dft(3, dims, howmany, buf, nullptr, howmany, 1, buf, nullptr, howmany, 1, sign,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

// (-1)^{m_x + m_y + m_z} for the signed modes of raw index idx.
double parity(const Grid& g, std::size_t idx) {
  const int n = g.n();
  const int i = static_cast<int>(idx % n), j = static_cast<int>((idx / n) % n), k = static_cast<int>(idx / (n * n));
  const int m = g.signed_mode(i) + g.signed_mode(j) + g.signed_mode(k);
  return (m & 1) ? -1.0 : 1.0;
}

template <class Field>
Field transform(const Field& in, int sign, int howmany) {
  Field out = in;
  const Grid& g = in.grid;
  auto* data = reinterpret_cast<cplx*>(out.values.data());
  const std::size_t total = g.size() * howmany;
  const double pre = std::pow(2.0 * std::numbers::pi, -1.5);
  if (sign > 0) {
    for (std::size_t p = 0; p < g.size(); ++p) {
      const double s = parity(g, p);
      for (int c = 0; c < howmany; ++c) data[p * howmany + c] *= s;
    }
  }
  raw_dft({data, total}, g.n(), howmany, sign);
  const double h = sign < 0 ? g.cell_volume() : std::pow(g.dual_spacing(), 3);
  const double scale = pre * h;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double s = sign < 0 ? scale * parity(g, p) : scale;
    for (int c = 0; c < howmany; ++c) data[p * howmany + c] *= s;
  }
  return out;
}

}  // namespace

void raw_dft(std::span<cplx> data, int n, int howmany, int sign) {
  fftw_plan p = cache().get(n, howmany, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, buf, buf);
}

SpinorField forward_transform(const SpinorField& f) { return transform(f, -1, 4); }
SpinorField inverse_transform(const SpinorField& fhat) { return transform(fhat, +1, 4); }
ScalarField forward_transform(const ScalarField& u) { return transform(u, -1, 1); }
ScalarField inverse_transform(const ScalarField& uhat) { return transform(uhat, +1, 1); }

double spectral_norm(const SpinorField& fhat) {
  double s = 0.0;
  for (const auto& v : fhat.values) s += v.norm_sq();
  return std::sqrt(s * std::pow(fhat.grid.dual_spacing(), 3));
}

}  // namespace dzm
