#pragma once

#include "dzm/field.hpp"
#include "dzm/multiplier.hpp"

namespace dzm {

enum class Rim { interior, plus, minus };

const char* to_string(Rim r);
Rim rim_from_string(const std::string& s);

/// Spectral parameter on the cut plane or on one rim of [0, inf).
struct SheetPoint {
  cplx z{};
  Rim rim = Rim::interior;

  static SheetPoint interior(cplx z);
  static SheetPoint plus(double lambda);
  static SheetPoint minus(double lambda);

  /// sqrt(z) with Im >= 0 in the interior; +-sqrt(lambda) on the rims.
  cplx sqrt() const;
};

/// Multiplier application: forward DFT, symbol, inverse DFT.
SpinorField apply_multiplier(const SpinorField& f, const Multiplier& m);
ScalarField apply_scalar_multiplier(const ScalarField& u, const std::function<cplx(const Vec3&)>& symbol,
                                    cplx dc_value = 0.0);

Multiplier h0_multiplier();
Multiplier a_multiplier();
/// Symbol (|xi|^2 - z)^{-1}; throws ConstraintError on a resonant grid shell.
Multiplier gamma0_multiplier(const SheetPoint& z, const Grid& grid);
/// Symbol (alpha.xi + z)/(|xi|^2 - z^2) for interior Im z != 0 or a rim point z = lambda >= 0.
Multiplier r0_multiplier(const SheetPoint& z, const Grid& grid);

SpinorField apply_h0(const SpinorField& f);
SpinorField apply_A(const SpinorField& f);
ScalarField apply_riesz1(const ScalarField& u);
SpinorField apply_gamma0(const SheetPoint& z, const SpinorField& u);
SpinorField apply_r0(const SheetPoint& z, const SpinorField& f);
SpinorField apply_h0_after_A(const SpinorField& g);

/// -Delta as the multiplier |xi|^2.
SpinorField apply_neg_laplacian(const SpinorField& f);
ScalarField apply_neg_laplacian(const ScalarField& u);
/// <D>^2 = 1 - Delta.
SpinorField apply_bracket_d_sq(const SpinorField& f);
/// D_j = -i d/dx_j as the multiplier xi_j, j in {0,1,2}.
ScalarField apply_derivative(const ScalarField& u, int j);

}  // namespace dzm
