#include "dzm/spectral.hpp"

#include <cmath>
#include <string>

#include "dzm/fft.hpp"
#include "dzm/parallel.hpp"

namespace dzm {

namespace {

constexpr double kShellTolerance = 1e-9;

void check_shell(const Grid& grid, double lambda) {
  const int n = grid.n();
  const double d = grid.dual_spacing();
  // |xi|^2 = d^2 (a^2 + b^2 + c^2) with integer modes; scan the distinct sums.
  const int half = n / 2;
  for (int a = 0; a <= half; ++a)
    for (int b = a; b <= half; ++b)
      for (int c = b; c <= half; ++c) {
        const double k2 = d * d * (a * a + b * b + c * c);
        if (std::abs(k2 - lambda) < kShellTolerance)
          throw ConstraintError("resonant shell: grid frequency with |xi|^2 = " + std::to_string(k2) +
                                " within 1e-9 of lambda = " + std::to_string(lambda));
      }
}

double xi_sq(const Vec3& xi) { return dot(xi, xi); }

}  // namespace

const char* to_string(Rim r) {
  switch (r) {
    case Rim::interior: return "interior";
    case Rim::plus: return "plus";
    case Rim::minus: return "minus";
  }
  return "interior";
}

Rim rim_from_string(const std::string& s) {
  if (s == "interior") return Rim::interior;
  if (s == "plus" || s == "+") return Rim::plus;
  if (s == "minus" || s == "-") return Rim::minus;
  throw ConstraintError("unknown rim '" + s + "'");
}

SheetPoint SheetPoint::interior(cplx z) {
  if (z.imag() == 0.0 && z.real() >= 0.0) throw ConstraintError("interior sheet point must lie off [0, inf)");
  return {z, Rim::interior};
}
SheetPoint SheetPoint::plus(double lambda) {
  if (!(lambda >= 0.0)) throw ConstraintError("rim points need lambda >= 0");
  return {lambda, Rim::plus};
}
SheetPoint SheetPoint::minus(double lambda) {
  if (!(lambda >= 0.0)) throw ConstraintError("rim points need lambda >= 0");
  return {lambda, Rim::minus};
}

cplx SheetPoint::sqrt() const {
  switch (rim) {
    case Rim::plus: return std::sqrt(z.real());
    case Rim::minus: return -std::sqrt(z.real());
    case Rim::interior: break;
  }
  cplx w = std::sqrt(z);
  if (w.imag() < 0.0) w = -w;
  return w;
}

SpinorField apply_multiplier(const SpinorField& f, const Multiplier& m) {
  SpinorField out = f;
  const Grid& g = f.grid;
  const int n = g.n();
  raw_dft(out.flat(), n, 4, -1);
  par::apply_multiplier(out.values, g, m);
  raw_dft(out.flat(), n, 4, +1);
  const double inv = 1.0 / static_cast<double>(g.size());
  for (auto& v : out.values) v *= inv;
  return out;
}

ScalarField apply_scalar_multiplier(const ScalarField& u, const std::function<cplx(const Vec3&)>& symbol,
                                    cplx dc_value) {
  ScalarField out = u;
  const Grid& g = u.grid;
  raw_dft(out.values, g.n(), 1, -1);
  const double inv = 1.0 / static_cast<double>(g.size());
  out.values[0] *= dc_value * inv;
  for (std::size_t i = 1; i < out.size(); ++i) out.values[i] *= symbol(g.wavevector(i)) * inv;
  raw_dft(out.values, g.n(), 1, +1);
  return out;
}

Multiplier h0_multiplier() {
  return {[](const Vec3&) { return SymbolValue{0.0, 1.0}; }, Multiplier::DcPolicy::zero, {}};
}

Multiplier a_multiplier() {
  return {[](const Vec3& xi) { return SymbolValue{0.0, 1.0 / xi_sq(xi)}; }, Multiplier::DcPolicy::zero, {}};
}

Multiplier gamma0_multiplier(const SheetPoint& z, const Grid& grid) {
  if (z.rim == Rim::interior) {
    const cplx zz = z.z;
    return {[zz](const Vec3& xi) { return SymbolValue{1.0 / (xi_sq(xi) - zz), 0.0}; }, Multiplier::DcPolicy::value,
            SymbolValue{-1.0 / zz, 0.0}};
  }
  const double lambda = z.z.real();
  if (lambda == 0.0)
    return {[](const Vec3& xi) { return SymbolValue{1.0 / xi_sq(xi), 0.0}; }, Multiplier::DcPolicy::zero, {}};
  check_shell(grid, lambda);
  return {[lambda](const Vec3& xi) { return SymbolValue{1.0 / (xi_sq(xi) - lambda), 0.0}; },
          Multiplier::DcPolicy::value, SymbolValue{-1.0 / lambda, 0.0}};
}

Multiplier r0_multiplier(const SheetPoint& z, const Grid& grid) {
  cplx zz = z.z;
  if (z.rim == Rim::interior) {
    if (zz.imag() == 0.0) throw ConstraintError("interior resolvent point needs Im z != 0");
  } else {
    const double lambda = zz.real();
    if (lambda == 0.0) return a_multiplier();
    check_shell(grid, lambda * lambda);
  }
  const cplx z2 = zz * zz;
  return {[zz, z2](const Vec3& xi) {
            const cplx d = 1.0 / (xi_sq(xi) - z2);
            return SymbolValue{zz * d, d};
          },
          Multiplier::DcPolicy::value, SymbolValue{-1.0 / zz, 0.0}};
}

SpinorField apply_h0(const SpinorField& f) { return apply_multiplier(f, h0_multiplier()); }
SpinorField apply_A(const SpinorField& f) { return apply_multiplier(f, a_multiplier()); }

ScalarField apply_riesz1(const ScalarField& u) {
  return apply_scalar_multiplier(u, [](const Vec3& xi) { return cplx{1.0 / std::sqrt(xi_sq(xi))}; });
}

SpinorField apply_gamma0(const SheetPoint& z, const SpinorField& u) {
  return apply_multiplier(u, gamma0_multiplier(z, u.grid));
}

SpinorField apply_r0(const SheetPoint& z, const SpinorField& f) {
  return apply_multiplier(f, r0_multiplier(z, f.grid));
}

SpinorField apply_h0_after_A(const SpinorField& g) { return apply_h0(apply_A(g)); }

SpinorField apply_neg_laplacian(const SpinorField& f) {
  return apply_multiplier(
      f, {[](const Vec3& xi) { return SymbolValue{xi_sq(xi), 0.0}; }, Multiplier::DcPolicy::zero, {}});
}

ScalarField apply_neg_laplacian(const ScalarField& u) {
  return apply_scalar_multiplier(u, [](const Vec3& xi) { return cplx{xi_sq(xi)}; });
}

SpinorField apply_bracket_d_sq(const SpinorField& f) {
  return apply_multiplier(f, {[](const Vec3& xi) { return SymbolValue{1.0 + xi_sq(xi), 0.0}; },
                              Multiplier::DcPolicy::value, SymbolValue{1.0, 0.0}});
}

ScalarField apply_derivative(const ScalarField& u, int j) {
  if (j < 0 || j > 2) throw std::out_of_range("derivative axis must be 0, 1 or 2");
  return apply_scalar_multiplier(u, [j](const Vec3& xi) { return cplx{xi[j]}; });
}

}  // namespace dzm
