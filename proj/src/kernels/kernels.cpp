#include "dzm/kernels.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <vector>

namespace dzm {

namespace {

using boost::math::quadrature::gauss;
constexpr double kPi = std::numbers::pi;

double coincident_guard(const Vec3& x, const Vec3& y) {
  const double r = norm(x - y);
  if (r == 0.0) throw ConstraintError("kernel evaluated at coincident points x = y");
  return r;
}

// e^{i w r} with the rim phases taken from sqrt(lambda) directly.
cplx phase(const SheetPoint& z, double r) {
  if (z.rim != Rim::interior) {
    const double k = std::sqrt(z.z.real());
    const double sgn = z.rim == Rim::plus ? 1.0 : -1.0;
    return {std::cos(k * r), sgn * std::sin(k * r)};
  }
  return std::exp(kI * z.sqrt() * r);
}

// Sorted, deduplicated panel breakpoints on [lo, hi]: geometric, refined around `focus`.
std::vector<double> breakpoints(double lo, double hi, int per_decade, double focus) {
  std::vector<double> b{lo, hi};
  const double step = std::pow(10.0, 1.0 / per_decade);
  for (double t = std::max(lo, 1e-6); t < hi; t *= step)
    if (t > lo) b.push_back(t);
  if (focus > lo && focus < hi) {
    b.push_back(focus);
    for (double d = 0.25; d < hi; d *= 2.0) {
      if (focus - d > lo) b.push_back(focus - d);
      if (focus + d < hi) b.push_back(focus + d);
    }
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end(), [](double a, double c) { return c - a <= 1e-14 * std::abs(c); }), b.end());
  return b;
}

// Panelled Gauss-Legendre with 10- and 15-point rules; returns (I15, |I15 - I10|).
template <class F>
std::pair<double, double> panel_integrate(const F& f, const std::vector<double>& bp) {
  double hi = 0.0, lo = 0.0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    hi += gauss<double, 15>::integrate(f, bp[i], bp[i + 1]);
    lo += gauss<double, 10>::integrate(f, bp[i], bp[i + 1]);
  }
  return {hi, std::abs(hi - lo)};
}

// Weighted radial kernel profile |r * kernel(r)|^2 (4 pi)^2 for one or two spectral points.
using Profile = std::function<double(double)>;

Profile single_profile(const SheetPoint& z) {
  return [z](double r) { return std::norm(phase(z, r)); };
}

Profile diff_profile(const SheetPoint& a, const SheetPoint& b) {
  return [a, b](double r) { return std::norm(phase(a, r) - phase(b, r)); };
}

void check_weights(double s, double sprime) {
  if (!(s > 0.5 && sprime > 0.5 && s + sprime > 2.0))
    throw ConstraintError("weighted kernel needs s, s' > 1/2 and s + s' > 2 (got s = " + std::to_string(s) +
                          ", s' = " + std::to_string(sprime) + ")");
}

// C(r) = int 4 pi rho^2 <rho>^{-2s'} S(rho, r, s) d rho.
double inner_weight(double r, double s, double sprime, int per_decade) {
  auto f = [=](double rho) {
    return 4.0 * kPi * rho * rho * std::pow(1.0 + rho * rho, -sprime) * spherical_bracket_average(rho, r, s);
  };
  return panel_integrate(f, breakpoints(0.0, 1e8, per_decade, r)).first;
}

// int_delta^R h(r)/(4 pi) C(r) dr plus the diagonal ball, with a rule-difference error.
std::pair<double, double> hs_radial(const Profile& h, double s, double sprime, const QuadratureSpec& quad,
                                    double R) {
  const auto bp = breakpoints(quad.delta, R, quad.panels_per_decade, 0.0);
  const std::size_t np = bp.size() - 1;
  std::vector<double> hi(np), lo(np);
  const int ppd = quad.panels_per_decade;
#pragma omp parallel for schedule(dynamic) num_threads(par::thread_count())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(np); ++i) {
    auto f = [&](double r) { return h(r) / (4.0 * kPi) * inner_weight(r, s, sprime, ppd); };
    hi[i] = gauss<double, 15>::integrate(f, bp[i], bp[i + 1]);
    lo[i] = gauss<double, 10>::integrate(f, bp[i], bp[i + 1]);
  }
  double v = 0.0, e = 0.0;
  for (std::size_t i = 0; i < np; ++i) {
    v += hi[i];
    e += std::abs(hi[i] - lo[i]);
  }
  // diagonal ball: int_{|u| < delta} |u|^{-2} du = 4 pi delta
  v += 4.0 * kPi * quad.delta * h(0.0) / (16.0 * kPi * kPi) * inner_weight(0.0, s, sprime, ppd);
  return {v, e};
}

// Mixture density for radial Monte-Carlo samples: half-Cauchy and log-uniform on [1e-3, 1e7].
constexpr double kLogLo = -3.0 * std::numbers::ln10, kLogHi = 7.0 * std::numbers::ln10;

double mixture_sample(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < 0.5) return std::tan(0.5 * kPi * u(rng));
  return std::exp(kLogLo + (kLogHi - kLogLo) * u(rng));
}

double mixture_density(double t) {
  double p = 0.5 * (2.0 / kPi) / (1.0 + t * t);
  if (t >= 1e-3 && t <= 1e7) p += 0.5 / (t * (kLogHi - kLogLo));
  return p;
}

Vec3 unit_vector(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> phi(0.0, 2.0 * kPi);
  const double c = u(rng), sn = std::sqrt(std::max(0.0, 1.0 - c * c)), p = phi(rng);
  return {sn * std::cos(p), sn * std::sin(p), c};
}

Estimate hs_monte_carlo(const Profile& h, double s, double sprime, const QuadratureSpec& quad) {
  auto sample = [&](std::mt19937_64& rng) {
    const double rho = mixture_sample(rng);
    const double r = mixture_sample(rng);
    const Vec3 x = rho * unit_vector(rng);
    const Vec3 y = x + r * unit_vector(rng);
    // (4 pi)^2 rho^2 r^2 <x>^{-2s'} |k|^2 <y>^{-2s} / (p(rho) p(r)), |k|^2 = h / (16 pi^2 r^2)
    return rho * rho * std::pow(1.0 + rho * rho, -sprime) * h(r) * std::pow(1.0 + dot(y, y), -s) /
           (mixture_density(rho) * mixture_density(r));
  };
  const SampleMoments m = par::monte_carlo(quad.samples, quad.seed, sample);
  const double n = static_cast<double>(m.count);
  const double mean = m.sum / n;
  const double var = std::max(0.0, m.sum_sq / n - mean * mean);
  const double se = std::sqrt(var / n);
  const double value = std::sqrt(std::max(0.0, mean));
  const double err = value > 0.0 ? 3.0 * se / (2.0 * value) : 3.0 * std::sqrt(se);
  return {value, err};
}

Estimate hs_estimate(const Profile& h, double s, double sprime, const QuadratureSpec& quad) {
  check_weights(s, sprime);
  if (!(quad.delta > 0.0)) throw ConstraintError("quadrature needs delta > 0");
  if (quad.scheme == QuadratureSpec::Scheme::monte_carlo) return hs_monte_carlo(h, s, sprime, quad);
  const auto [v1, e1] = hs_radial(h, s, sprime, quad, quad.radius);
  const auto [v2, e2] = hs_radial(h, s, sprime, quad, 2.0 * quad.radius);
  const auto [v3, e3] = hs_radial(h, s, sprime, quad, 4.0 * quad.radius);
  const double kappa = 2.0 * s + 2.0 * sprime - 4.0;
  // add the R^{-kappa} tail implied by each doubling; the two extrapolants bound the model error
  const double q = std::pow(2.0, -kappa) / (1.0 - std::pow(2.0, -kappa));
  const double a1 = v2 + (v2 - v1) * q;
  const double a2 = v3 + (v3 - v2) * q;
  const double sq = std::max(0.0, a2);
  const double value = std::sqrt(sq);
  const double abs_err_sq = std::max({e1, e2, e3}) + std::abs(a2 - a1) + 1e-14 * sq;
  const double err = value > 0.0 ? abs_err_sq / (2.0 * value) : std::sqrt(abs_err_sq);
  if (err > quad.tolerance * std::max(1.0, value))
    throw ConvergenceError("HS quadrature error estimate " + std::to_string(err) + " above tolerance");
  return {value, err};
}

}  // namespace

void KernelSpec::validate() const {
  if (kind == KernelKind::k_weighted) check_weights(s, sprime);
  if (kind == KernelKind::r0 && z.rim == Rim::interior && z.z.imag() == 0.0)
    throw ConstraintError("r0 kernel at an interior point needs Im z != 0");
}

cplx gamma0_kernel(const SheetPoint& z, const Vec3& x, const Vec3& y) {
  const double r = coincident_guard(x, y);
  return phase(z, r) / (4.0 * kPi * r);
}

Matrix4 a_kernel(const Vec3& x, const Vec3& y) {
  const double r = coincident_guard(x, y);
  return (kI / (4.0 * kPi * r * r * r)) * alpha_dot_matrix(x - y);
}

Matrix4 r0_kernel(const SheetPoint& z, const Vec3& x, const Vec3& y) {
  const double r = coincident_guard(x, y);
  const cplx zz = z.z;
  double sgn;
  if (z.rim == Rim::interior) {
    if (zz.imag() == 0.0) throw ConstraintError("r0 kernel at an interior point needs Im z != 0");
    sgn = zz.imag() > 0.0 ? 1.0 : -1.0;
  } else {
    sgn = z.rim == Rim::plus ? 1.0 : -1.0;
  }
  cplx ph;
  if (z.rim == Rim::interior) {
    ph = std::exp(sgn * kI * zz * r);
  } else {
    const double lam = zz.real();
    ph = {std::cos(lam * r), sgn * std::sin(lam * r)};
  }
  const Matrix4 ad = alpha_dot_matrix(x - y);
  Matrix4 m = (kI / (r * r)) * ad + (sgn * zz / r) * ad + zz * Matrix4::identity();
  return (ph / (4.0 * kPi * r)) * m;
}

double spherical_bracket_average(double rho, double r, double a) {
  const double b = 2.0 * rho * r;
  const double um = 1.0 + (rho - r) * (rho - r);
  if (b == 0.0) return std::pow(1.0 + rho * rho + r * r, -a);
  const double t = std::log1p(2.0 * b / um);  // log(u+/u-)
  // (1/2b) int_{u-}^{u+} u^{-a} du
  const double integral = (a == 1.0) ? t : std::pow(um, 1.0 - a) * std::expm1((1.0 - a) * t) / (1.0 - a);
  return integral / (2.0 * b);
}

Estimate hs_norm_k(const SheetPoint& z, double s, double sprime, const QuadratureSpec& quad) {
  return hs_estimate(single_profile(z), s, sprime, quad);
}

Estimate hs_norm_k_diff(const SheetPoint& z1, const SheetPoint& z2, double s, double sprime,
                        const QuadratureSpec& quad) {
  return hs_estimate(diff_profile(z1, z2), s, sprime, quad);
}

Estimate ekku_integral(double gamma, const Vec3& x, const QuadratureSpec& quad) {
  if (!(gamma > 1.0)) throw ConstraintError("ekku integral diverges for gamma <= 1");
  if (!(quad.delta > 0.0)) throw ConstraintError("quadrature needs delta > 0");
  const double xn = norm(x);
  const double R = std::max(quad.radius, 4.0 * xn + 10.0);
  auto f = [=](double r) { return 4.0 * kPi * spherical_bracket_average(xn, r, 0.5 * gamma); };
  const auto [v, e] = panel_integrate(f, breakpoints(quad.delta, R, quad.panels_per_decade, xn));
  const double ball = 4.0 * kPi * quad.delta * std::pow(1.0 + xn * xn, -0.5 * gamma);
  const double tail = 4.0 * kPi * std::pow(R - xn, 1.0 - gamma) / (gamma - 1.0);
  return {v + ball, e + tail};
}

const char* to_string(EkkuBranch b) {
  switch (b) {
    case EkkuBranch::power: return "power";
    case EkkuBranch::log: return "log";
    case EkkuBranch::saturated: return "saturated";
  }
  return "power";
}

EkkuBranch ekku_branch(double gamma) {
  if (std::abs(gamma - 3.0) <= 1e-12 * 3.0) return EkkuBranch::log;
  return gamma < 3.0 ? EkkuBranch::power : EkkuBranch::saturated;
}

double ekku_profile(double gamma, double x_norm) {
  const double br = std::sqrt(1.0 + x_norm * x_norm);
  switch (ekku_branch(gamma)) {
    case EkkuBranch::power: return std::pow(br, 1.0 - gamma);
    case EkkuBranch::log: return std::log(1.0 + br) / (br * br);
    case EkkuBranch::saturated: return 1.0 / (br * br);
  }
  return 0.0;
}

Spinor4 interpolate(const SpinorField& g, const Vec3& x) {
  const Grid& grid = g.grid;
  const int n = grid.n();
  const double h = grid.spacing();
  std::array<int, 3> base{};
  std::array<std::array<double, 6>, 3> w{};
  for (int a = 0; a < 3; ++a) {
    const double t = (x[a] + grid.half_width()) / h;
    const double fl = std::floor(t);
    base[a] = static_cast<int>(fl) - 2;
    const double u = t - fl + 2.0;  // position relative to node base[a]
    for (int i = 0; i < 6; ++i) {
      double l = 1.0;
      for (int j = 0; j < 6; ++j)
        if (j != i) l *= (u - j) / static_cast<double>(i - j);
      w[a][i] = l;
    }
  }
  Spinor4 out;
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  for (int k = 0; k < 6; ++k) {
    const int kk = wrap(base[2] + k);
    for (int j = 0; j < 6; ++j) {
      const int jj = wrap(base[1] + j);
      const double wjk = w[1][j] * w[2][k];
      for (int i = 0; i < 6; ++i) out += (w[0][i] * wjk) * g[grid.index(wrap(base[0] + i), jj, kk)];
    }
  }
  return out;
}

namespace {

// C-infinity step: 1 on [0, r/2], 0 on [2r, inf).
double cutoff(double d, double r) {
  const double t = (d - 0.5 * r) / (1.5 * r);
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return b / (a + b);
}

// int_{|y - x0| <= 2r} weight(|y - x0|) k(x0, y) g(y) dy in spherical coordinates.
Spinor4 ball_quadrature(const SpinorField& g, const Vec3& x0, double r, const KernelFn& k,
                        const std::function<double(double)>& weight) {
  constexpr int kPolar = 16, kAzimuth = 32;
  const auto& cn = gauss<double, kPolar>::abscissa();
  const auto& cw = gauss<double, kPolar>::weights();
  std::vector<std::pair<double, double>> polar;  // (cos theta, weight) over [-1, 1]
  for (std::size_t i = 0; i < cn.size(); ++i) {
    polar.emplace_back(cn[i], cw[i]);
    if (cn[i] != 0.0) polar.emplace_back(-cn[i], cw[i]);
  }
  const double panels[] = {0.0, 0.5 * r, r, 1.5 * r, 2.0 * r};
  const auto& rn = gauss<double, 12>::abscissa();
  const auto& rw = gauss<double, 12>::weights();
  std::vector<std::pair<double, double>> radial;
  for (int p = 0; p < 4; ++p) {
    const double a = panels[p], b = panels[p + 1], mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < rn.size(); ++i) {
      radial.emplace_back(mid + half * rn[i], half * rw[i]);
      if (rn[i] != 0.0) radial.emplace_back(mid - half * rn[i], half * rw[i]);
    }
  }
  Spinor4 total;
  const double dphi = 2.0 * kPi / kAzimuth;
  for (const auto& [rho, wr] : radial) {
    const double wt = weight(rho);
    if (wt == 0.0) continue;
    Spinor4 shell;
    for (const auto& [c, wc] : polar) {
      const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (int m = 0; m < kAzimuth; ++m) {
        const double ph = (m + 0.5) * dphi;
        const Vec3 u{sn * std::cos(ph), sn * std::sin(ph), c};
        const Vec3 y = x0 + rho * u;
        shell += (wc * dphi) * (k(x0, y) * interpolate(g, y));
      }
    }
    total += (wr * wt * rho * rho) * shell;
  }
  return total;
}

}  // namespace

SplitIntegral singular_quadrature(const SpinorField& g, const Vec3& x0, double r, const KernelFn& k) {
  if (!(r >= 2.0 * g.grid.spacing())) throw ConstraintError("split radius r must be at least 2h");
  if (4.0 * r >= g.grid.half_width()) throw ConstraintError("split radius too large for the box");
  SplitIntegral out;
  out.near = ball_quadrature(g, x0, r, k, [](double) { return 1.0; });
  auto outer = [r](double d) { return 1.0 - cutoff(d, r); };
  const Spinor4 lattice = par::lattice_kernel_sum(g.values, g.grid, x0, k, outer);
  out.far = lattice - ball_quadrature(g, x0, r, k, outer);
  return out;
}

PointwiseValue evaluate_pointwise(const SpinorField& f, const MatrixPotential& q, const Vec3& x0, double r,
                                  double c_f) {
  require_same_grid(f.grid, q.grid, "evaluate_pointwise");
  const SpinorField g = apply_potential(q, f);
  const SplitIntegral s = singular_quadrature(g, x0, r, [](const Vec3& x, const Vec3& y) {
    return cplx{-1.0} * a_kernel(x, y);
  });
  PointwiseValue v;
  v.near = s.near;
  v.far = s.far;
  v.total = s.near + s.far;
  v.near_bound = 3.0 / (4.0 * kPi) * q.c_q * c_f * near_epsilon(r);
  return v;
}

FarContinuity far_continuity(const SpinorField& f, const MatrixPotential& q, const Vec3& x0, const Vec3& x,
                             double r) {
  if (!(norm(x - x0) < r)) throw ConstraintError("far_continuity needs |x - x0| < r");
  const SpinorField g = apply_potential(q, f);
  auto kern = [](const Vec3& a, const Vec3& b) { return cplx{-1.0} * a_kernel(a, b); };
  const SplitIntegral s0 = singular_quadrature(g, x0, r, kern);
  const SplitIntegral s1 = singular_quadrature(g, x, r, kern);
  FarContinuity out;
  out.difference = (s1.far - s0.far).norm();
  double b = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = norm(g.grid.point(i) - x0);
    if (d > r) b += g[i].norm() / (d * d);
  }
  out.bound = b * g.grid.cell_volume() * 3.0 / (4.0 * kPi) * (1.0 + 2.25);
  return out;
}

std::pair<double, double> bound_constants_linf(double p, double q) {
  if (!(p > 1.0 && p < 3.0 && q > 3.0) || std::isinf(q))
    throw ConstraintError("bound constants need 1 < p < 3 < q < inf (integrals diverge otherwise)");
  const double qp = q / (q - 1.0), pp = p / (p - 1.0);
  const double pre = 1.0 / (2.0 * kPi * kPi);
  const double near = pre * std::pow(4.0 * kPi / (3.0 - 2.0 * qp), 1.0 / qp);
  const double far = pre * std::pow(4.0 * kPi / (2.0 * pp - 3.0), 1.0 / pp);
  return {near, far};
}

}  // namespace dzm
