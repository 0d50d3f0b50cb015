#pragma once

#include <functional>

#include "dzm/algebra.hpp"

namespace dzm {

/// Value of a Fourier symbol of the form scalar * I4 + dirac * (alpha . xi).
struct SymbolValue {
  cplx scalar{};
  cplx dirac{};
};

/// Fourier multiplier on 4-spinor fields. The DC mode (xi = 0) is handled
/// by the policy instead of the symbol, since most symbols here are singular there.
struct Multiplier {
  enum class DcPolicy { zero, value };

  std::function<SymbolValue(const Vec3& xi)> symbol;
  DcPolicy dc_policy = DcPolicy::zero;
  SymbolValue dc_value{};

  SymbolValue at(const Vec3& xi, bool is_dc) const {
    if (is_dc) return dc_policy == DcPolicy::zero ? SymbolValue{} : dc_value;
    return symbol(xi);
  }
};

inline Spinor4 apply_symbol(const SymbolValue& v, const Vec3& xi, const Spinor4& s) {
  Spinor4 out = v.scalar * s;
  if (v.dirac != cplx{}) out += v.dirac * alpha_dot(xi, s);
  return out;
}

}  // namespace dzm
