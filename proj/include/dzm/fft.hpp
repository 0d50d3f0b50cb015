#pragma once

#include <span>

#include "dzm/field.hpp"

namespace dzm {

// Unitary transform with the convention fhat(xi) = (2 pi)^{-3/2} int e^{-i x.xi} f(x) dx.
// Frequency-side fields are stored in raw DFT index order (see Grid::wavevector)
// and carry volume element (pi/L)^3 in norms.

SpinorField forward_transform(const SpinorField& f);
SpinorField inverse_transform(const SpinorField& fhat);
ScalarField forward_transform(const ScalarField& u);
ScalarField inverse_transform(const ScalarField& uhat);

/// L2 norm of a frequency-side field, volume element (pi/L)^3.
double spectral_norm(const SpinorField& fhat);

/// Unnormalized in-place DFT of `howmany` interleaved components on an n^3 grid.
/// sign = -1 forward, +1 backward. Plans are cached and shared between threads.
void raw_dft(std::span<cplx> data, int n, int howmany, int sign);

}  // namespace dzm
