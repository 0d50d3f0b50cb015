#include "dzm/zeromode.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dzm/norms.hpp"
#include "dzm/spectral.hpp"

namespace dzm {

namespace {

double require_nonzero(const SpinorField& f) {
  const double n = l2_norm(f);
  if (!(n > 0.0)) throw ConstraintError("zero field");
  return n;
}

}  // namespace

Spinor2 spin_up(const Vec3& w) {
  const double theta = std::acos(std::clamp(w[2], -1.0, 1.0));
  const double phi = std::atan2(w[1], w[0]);
  return Spinor2{{std::cos(0.5 * theta), std::polar(1.0, phi) * std::sin(0.5 * theta)}};
}

Spinor2 loss_yau_psi(const Vec3& x, const Vec3& w) {
  const Spinor2 phi0 = spin_up(w);
  const double pre = std::pow(1.0 + dot(x, x), -1.5);
  return pre * (phi0 + kI * sigma_dot(x, phi0));
}

Vec3 loss_yau_potential(const Vec3& x, const Vec3& w) {
  const double r2 = dot(x, x);
  const double pre = 3.0 / ((1.0 + r2) * (1.0 + r2));
  const Vec3 c = cross(w, x);
  const double wx = dot(w, x);
  return pre * ((1.0 - r2) * w + (2.0 * wx) * x + 2.0 * c);
}

ZeroModeFixture loss_yau_fixture(const Grid& grid, const Vec3& w, Embedding e) {
  if (std::abs(norm(w) - 1.0) > 1e-12) throw ConstraintError("loss_yau_fixture needs a unit vector w");
  auto f = SpinorField::from_function(grid, [&](const Vec3& x) {
    const Spinor2 psi = loss_yau_psi(x, w);
    const cplx up = e == Embedding::both ? 1.0 : 0.0;
    return Spinor4{{up * psi[0], up * psi[1], psi[0], psi[1]}};
  });
  auto q = MatrixPotential::from_function(
      grid, [&](const Vec3& x) { return cplx{-1.0} * alpha_dot_matrix(loss_yau_potential(x, w)); }, 2.0, 3.0);
  const double c_f = e == Embedding::both ? std::sqrt(2.0) : 1.0;
  return {std::move(f), std::move(q), 2.0, 3.0, c_f, e == Embedding::both ? "loss-yau" : "loss-yau-lower"};
}

double residual(const SpinorField& f, const MatrixPotential& q) {
  require_same_grid(f.grid, q.grid, "residual");
  const double nf = require_nonzero(f);
  SpinorField r = apply_h0(f);
  r += apply_potential(q, f);
  return l2_norm(r) / nf;
}

double residual(const ZeroModeFixture& fix) { return residual(fix.f, fix.q); }

double fixed_point_defect(const SpinorField& f, const MatrixPotential& q, cplx coupling) {
  require_same_grid(f.grid, q.grid, "fixed_point_defect");
  const double nf = require_nonzero(f);
  SpinorField d = apply_A(mean_free(apply_potential(q, f)));
  d *= coupling;
  d += f;
  return l2_norm(d) / nf;
}

double fixed_point_defect(const ZeroModeFixture& fix) { return fixed_point_defect(fix.f, fix.q); }

DecayFit decay_fit(const SpinorField& f, double r_min, double r_max) {
  const Grid& g = f.grid;
  if (!(r_min > 0.0 && r_min < r_max && r_max <= 0.5 * g.half_width() + 1e-12))
    throw ConstraintError("decay_fit needs 0 < r_min < r_max <= L/2");
  const double width = g.spacing() * std::sqrt(3.0);
  const int nbins = std::max(1, static_cast<int>(std::ceil((r_max - r_min) / width)));
  std::vector<double> best(nbins, -1.0), where(nbins, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = norm(g.point(i));
    if (r < r_min || r > r_max) continue;
    const int b = std::min(nbins - 1, static_cast<int>((r - r_min) / width));
    const double v = f[i].norm();
    if (v > best[b]) {
      best[b] = v;
      where[b] = r;
    }
  }
  std::vector<double> xs, ys;
  for (int b = 0; b < nbins; ++b) {
    if (best[b] < 0.0) throw ConstraintError("decay_fit: empty radial shell " + std::to_string(b));
    if (!(best[b] > 0.0)) throw ConstraintError("decay_fit: field vanishes on a shell");
    xs.push_back(0.5 * std::log1p(where[b] * where[b]));
    ys.push_back(std::log(best[b]));
  }
  if (xs.size() < 2) throw ConstraintError("decay_fit: window holds fewer than two shells");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  DecayFit fit;
  fit.exponent = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.exponent * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - fit.intercept - fit.exponent * xs[i];
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  fit.r_min = r_min;
  fit.r_max = r_max;
  fit.bins = static_cast<int>(xs.size());
  return fit;
}

double weighted_sup(const SpinorField& f, double power) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec3 x = f.grid.point(i);
    m = std::max(m, f[i].norm() * std::pow(1.0 + dot(x, x), 0.5 * power));
  }
  return m;
}

const char* to_string(BootstrapBranch b) {
  switch (b) {
    case BootstrapBranch::power: return "power";
    case BootstrapBranch::log: return "log";
    case BootstrapBranch::saturated: return "saturated";
  }
  return "power";
}

BootstrapTrace bootstrap_trace(double rho) {
  if (!(rho > 1.0)) throw ConstraintError("bootstrap_trace needs rho > 1");
  BootstrapTrace t;
  t.rho = rho;
  for (int k = 1;; ++k) {
    const double e = k * (rho - 1.0);
    BootstrapStep s{k, std::min(e, 2.0), BootstrapBranch::power};
    if (std::abs(e - 2.0) <= 1e-12 * 2.0) {
      s.exponent = 2.0;
      s.branch = BootstrapBranch::log;
    } else if (e > 2.0) {
      s.branch = BootstrapBranch::saturated;
    }
    t.steps.push_back(s);
    if (s.branch == BootstrapBranch::saturated) {
      t.n_star = k;
      break;
    }
  }
  return t;
}

ResonanceReport resonance_check(const ZeroModeFixture& fix, double s) {
  const double rho = fix.rho;
  if (!(s > 0.0 && s <= std::min(1.5, rho - 1.0)))
    throw ConstraintError("resonance_check needs 0 < s <= min(3/2, rho - 1)");
  ResonanceReport r;
  r.s = s;
  r.rho = rho;
  r.rho_hypothesis = rho > 1.5;
  const SpinorField qf = apply_potential(fix.q, fix.f);
  r.weighted_f = weighted_norm(fix.f, WeightSpec{-s});
  r.weighted_qf = weighted_norm(qf, WeightSpec{rho - s});
  r.aqf = l2_norm(apply_A(qf));
  r.h1 = sobolev_h1_norm(fix.f);
  r.lemma_bound = 0.5 * weighted_norm(qf, WeightSpec{1.0});
  r.lemma_bound_holds = r.aqf <= r.lemma_bound;
  r.sharp_bound = 2.0 * weighted_norm(qf, [](const Vec3& x) { return norm(x); });
  r.sharp_bound_holds = r.aqf <= r.sharp_bound;
  r.all_finite = std::isfinite(r.weighted_f) && std::isfinite(r.weighted_qf) && std::isfinite(r.aqf) &&
                 std::isfinite(r.h1);
  r.residual = residual(fix);
  r.defect = fixed_point_defect(fix);
  r.zero_mode_candidate = r.defect < 0.5;
  r.consistent = r.all_finite && r.lemma_bound_holds;
  return r;
}

}  // namespace dzm
