#pragma once

#include "dzm/field.hpp"

namespace dzm {

double l2_norm(const SpinorField& f);
double l2_norm(const ScalarField& u);

/// ||<x>^s f||_2.
double weighted_norm(const SpinorField& f, const WeightSpec& w);
/// ||w(x) f||_2 for an arbitrary weight.
double weighted_norm(const SpinorField& f, const std::function<double(const Vec3&)>& w);

/// ||<D> f||_2 via the multiplier (1 + |xi|^2)^{1/2}.
double sobolev_h1_norm(const SpinorField& f);

/// ||grad u||_2 = || |xi| uhat ||_2.
double gradient_norm(const ScalarField& u);
double gradient_norm(const SpinorField& f);

/// Discrete L^p norm, p >= 1 (p = inf allowed).
double lp_norm(const SpinorField& f, double p);

/// sup over grid centres of ||u||_{L^q(B(x, 1))}, periodic distance. Requires h <= 1/2.
double lq_ul_norm(const ScalarField& u, double q);

/// ||u / |x| ||_2. With `origin_correction` the excluded origin cell is replaced by the
/// lattice-sum correction -Z(2) h phi(0) + (h^3/6) Delta phi(0), phi = |u|^2.
double hardy_lhs(const ScalarField& u, bool origin_correction = true);

/// Z(2) = sum' |m|^{-2} over Z^3 (analytically continued), simple cubic lattice.
inline constexpr double kLatticeZeta2 = -8.91363291758515;

}  // namespace dzm
