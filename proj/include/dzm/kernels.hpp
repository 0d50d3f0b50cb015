#pragma once

#include <cstdint>
#include <utility>

#include "dzm/field.hpp"
#include "dzm/parallel.hpp"
#include "dzm/spectral.hpp"

namespace dzm {

enum class KernelKind { gamma0, r0, a_op, k_weighted };

/// Closed-form kernel descriptor. k_weighted is <x>^{-s'} Gamma0(z)(x, y) <y>^{-s}.
struct KernelSpec {
  KernelKind kind = KernelKind::gamma0;
  SheetPoint z{};
  double s = 0.0;
  double sprime = 0.0;

  void validate() const;
};

struct QuadratureSpec {
  enum class Scheme { gauss_legendre, monte_carlo };
  Scheme scheme = Scheme::gauss_legendre;
  int panels_per_decade = 4;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 20240917;
  double delta = 1e-3;       // excluded diagonal ball radius
  double radius = 1e6;       // truncation radius
  double tolerance = 1e-6;   // requested absolute accuracy
};

/// Value with an error estimate (absolute).
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

cplx gamma0_kernel(const SheetPoint& z, const Vec3& x, const Vec3& y);
Matrix4 a_kernel(const Vec3& x, const Vec3& y);
Matrix4 r0_kernel(const SheetPoint& z, const Vec3& x, const Vec3& y);

/// Spherical average of (1 + |x + r u|^2)^{-a} over unit vectors u, |x| = rho.
double spherical_bracket_average(double rho, double r, double a);

/// ||K(z)||_HS for the weighted Gamma0 kernel.
Estimate hs_norm_k(const SheetPoint& z, double s, double sprime, const QuadratureSpec& quad);
/// ||K(z1) - K(z2)||_HS.
Estimate hs_norm_k_diff(const SheetPoint& z1, const SheetPoint& z2, double s, double sprime,
                        const QuadratureSpec& quad);

/// J_gamma(x) = int dy / (|x - y|^2 <y>^gamma).
Estimate ekku_integral(double gamma, const Vec3& x, const QuadratureSpec& quad);

enum class EkkuBranch { power, log, saturated };
const char* to_string(EkkuBranch b);
EkkuBranch ekku_branch(double gamma);
/// Growth profile of J_gamma: <x>^{1-gamma}, <x>^{-2} log(1 + <x>) or <x>^{-2}.
double ekku_profile(double gamma, double x_norm);

/// Near/far split of int k(x0, y) g(y) dy around x0.
struct SplitIntegral {
  Spinor4 near;  // over B(x0, 2r)
  Spinor4 far;   // over the complement
};

/// 6-point tensor Lagrange interpolation of a periodic grid field at an arbitrary point.
Spinor4 interpolate(const SpinorField& g, const Vec3& x);

/// Quadrature of a kernel with at most |x - y|^{-2} singularity against a grid field.
SplitIntegral singular_quadrature(const SpinorField& g, const Vec3& x0, double r, const KernelFn& k);

struct PointwiseValue {
  Spinor4 near;
  Spinor4 far;
  Spinor4 total;
  double near_bound = 0.0;  // 3/(4 pi) C_q C_f eps(r), eps(r) = 8 pi r
};

/// -(A Q f)(x0) split at radius 2r.
PointwiseValue evaluate_pointwise(const SpinorField& f, const MatrixPotential& q, const Vec3& x0, double r,
                                  double c_f);

/// eps(r) = int_{|y| <= 2r} |y|^{-2} dy.
inline double near_epsilon(double r) { return 8.0 * 3.14159265358979323846 * r; }

struct FarContinuity {
  double difference = 0.0;  // |f_e(x) - f_e(x0)|
  double bound = 0.0;       // int_{|y - x0| > r} (3/4pi)(1 + 9/4)|x0 - y|^{-2} |Q f|
};
FarContinuity far_continuity(const SpinorField& f, const MatrixPotential& q, const Vec3& x0, const Vec3& x,
                             double r);

/// Hoelder-split constants (near C_{q'}, far C_{p'}) for 1 < p < 3 < q.
std::pair<double, double> bound_constants_linf(double p, double q);

}  // namespace dzm
