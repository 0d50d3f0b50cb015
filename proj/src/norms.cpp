#include "dzm/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dzm/fft.hpp"
#include "dzm/parallel.hpp"
#include "dzm/spectral.hpp"

namespace dzm {

double l2_norm(const SpinorField& f) {
  return std::sqrt(par::weighted_sum_sq(f.values, f.grid, [](const Vec3&) { return 1.0; }));
}

double l2_norm(const ScalarField& u) {
  double s = 0.0;
  for (const auto& v : u.values) s += std::norm(v);
  return std::sqrt(s * u.grid.cell_volume());
}

double weighted_norm(const SpinorField& f, const WeightSpec& w) {
  if (w.s == 0.0) return l2_norm(f);
  const double s = w.s;
  return std::sqrt(
      par::weighted_sum_sq(f.values, f.grid, [s](const Vec3& x) { return std::pow(1.0 + dot(x, x), 0.5 * s); }));
}

double weighted_norm(const SpinorField& f, const std::function<double(const Vec3&)>& w) {
  return std::sqrt(par::weighted_sum_sq(f.values, f.grid, w));
}

double sobolev_h1_norm(const SpinorField& f) {
  // ||<D> f||^2 = <f, <D>^2 f>
  const SpinorField g = apply_bracket_d_sq(f);
  return std::sqrt(std::max(0.0, inner(f, g).real()));
}

double gradient_norm(const ScalarField& u) {
  const ScalarField uhat = forward_transform(u);
  double s = 0.0;
  for (std::size_t i = 0; i < uhat.size(); ++i) {
    const Vec3 xi = u.grid.wavevector(i);
    s += dot(xi, xi) * std::norm(uhat[i]);
  }
  return std::sqrt(s * std::pow(u.grid.dual_spacing(), 3));
}

double gradient_norm(const SpinorField& f) { return l2_norm(apply_h0(f)); }

double lp_norm(const SpinorField& f, double p) {
  if (!(p >= 1.0)) throw ConstraintError("lp_norm needs p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, v.norm());
    return m;
  }
  double s = 0.0;
  for (const auto& v : f.values) s += std::pow(v.norm(), p);
  return std::pow(s * f.grid.cell_volume(), 1.0 / p);
}

namespace {

BallStencil unit_ball_stencil(double h) {
  constexpr int kSub = 12;
  BallStencil st;
  const int R = static_cast<int>(std::ceil(1.0 / h)) + 1;
  for (int c = -R; c <= R; ++c)
    for (int b = -R; b <= R; ++b)
      for (int a = -R; a <= R; ++a) {
        // nearest and farthest corner distance decide the easy cases
        auto lo = [h](int m) { return std::max(0.0, std::abs(m) * h - 0.5 * h); };
        auto hi = [h](int m) { return std::abs(m) * h + 0.5 * h; };
        const double dmin2 = lo(a) * lo(a) + lo(b) * lo(b) + lo(c) * lo(c);
        const double dmax2 = hi(a) * hi(a) + hi(b) * hi(b) + hi(c) * hi(c);
        double w;
        if (dmin2 > 1.0) continue;
        if (dmax2 <= 1.0) {
          w = 1.0;
        } else {
          int inside = 0;
          for (int k = 0; k < kSub; ++k)
            for (int j = 0; j < kSub; ++j)
              for (int i = 0; i < kSub; ++i) {
                const double x = h * (a - 0.5 + (i + 0.5) / kSub);
                const double y = h * (b - 0.5 + (j + 0.5) / kSub);
                const double z = h * (c - 0.5 + (k + 0.5) / kSub);
                if (x * x + y * y + z * z <= 1.0) ++inside;
              }
          w = static_cast<double>(inside) / (kSub * kSub * kSub);
        }
        if (w > 0.0) {
          st.offsets.push_back({a, b, c});
          st.weights.push_back(w);
        }
      }
  return st;
}

}  // namespace

double lq_ul_norm(const ScalarField& u, double q) {
  if (!(q >= 1.0)) throw ConstraintError("lq_ul_norm needs q >= 1");
  const double h = u.grid.spacing();
  if (h > 0.5) throw ConstraintError("lq_ul_norm: grid spacing h > 1/2 does not resolve unit balls");
  if (2.0 * u.grid.half_width() < 2.0) throw ConstraintError("lq_ul_norm: box smaller than a unit ball");
  std::vector<double> abs_pow(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) abs_pow[i] = std::pow(std::abs(u[i]), q);
  const double m = par::ball_power_max(abs_pow, u.grid, unit_ball_stencil(h));
  return std::pow(m * u.grid.cell_volume(), 1.0 / q);
}

double hardy_lhs(const ScalarField& u, bool origin_correction) {
  const Grid& g = u.grid;
  const std::size_t o = g.origin_index();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (i == o) continue;
    const Vec3 x = g.point(i);
    s += std::norm(u[i]) / dot(x, x);
  }
  s *= g.cell_volume();
  if (origin_correction) {
    ScalarField phi(g);
    for (std::size_t i = 0; i < u.size(); ++i) phi[i] = std::norm(u[i]);
    const double lap0 = -apply_neg_laplacian(phi)[o].real();
    const double h = g.spacing();
    s += -kLatticeZeta2 * h * phi[o].real() + g.cell_volume() / 6.0 * lap0;
  }
  return std::sqrt(std::max(0.0, s));
}

}  // namespace dzm
