#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dzm/algebra.hpp"

namespace dzm {

/// Raised when an operation's documented precondition does not hold.
class ConstraintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure fails to meet its requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Periodic cube [-L, L)^3 sampled with n points per axis.
///
/// Point (i, j, k) sits at x = -L + h (i, j, k) with h = 2L/n and the linear
/// index is i + n (j + n k) (x fastest). Dual frequencies are (pi/L) m with
/// m in {-n/2, ..., n/2 - 1}; the raw DFT index i maps to m = i for i < n/2
/// and m = i - n otherwise.
class Grid {
 public:
  Grid(int n, double half_width);

  int n() const { return n_; }
  double half_width() const { return L_; }
  double spacing() const { return 2.0 * L_ / n_; }
  double cell_volume() const {
    const double h = spacing();
    return h * h * h;
  }
  double dual_spacing() const;
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(n_) * (j + static_cast<std::size_t>(n_) * k);
  }
  /// Coordinate of the sample with per-axis index i.
  double coord(int i) const { return -L_ + spacing() * i; }
  Vec3 point(std::size_t idx) const;
  /// Signed frequency index for raw DFT index i.
  int signed_mode(int i) const { return i < n_ / 2 ? i : i - n_; }
  double frequency(int i) const;
  Vec3 wavevector(std::size_t idx) const;
  /// Linear index of the grid point at the origin.
  std::size_t origin_index() const { return index(n_ / 2, n_ / 2, n_ / 2); }

  friend bool operator==(const Grid& a, const Grid& b) { return a.n_ == b.n_ && a.L_ == b.L_; }

 private:
  int n_;
  double L_;
};

/// 4-spinor field sampled on a grid (or its frequency-side counterpart).
struct SpinorField {
  Grid grid;
  std::vector<Spinor4> values;

  explicit SpinorField(const Grid& g) : grid(g), values(g.size()) {}
  SpinorField(const Grid& g, std::vector<Spinor4> v);

  static SpinorField from_function(const Grid& g, const std::function<Spinor4(const Vec3&)>& fn);

  std::size_t size() const { return values.size(); }
  Spinor4& operator[](std::size_t i) { return values[i]; }
  const Spinor4& operator[](std::size_t i) const { return values[i]; }

  SpinorField& operator+=(const SpinorField& o);
  SpinorField& operator-=(const SpinorField& o);
  SpinorField& operator*=(cplx s);
  friend SpinorField operator+(SpinorField a, const SpinorField& b) { return a += b; }
  friend SpinorField operator-(SpinorField a, const SpinorField& b) { return a -= b; }
  friend SpinorField operator*(cplx s, SpinorField a) { return a *= s; }

  std::span<cplx> flat() { return {reinterpret_cast<cplx*>(values.data()), values.size() * 4}; }
  std::span<const cplx> flat() const {
    return {reinterpret_cast<const cplx*>(values.data()), values.size() * 4};
  }
};

/// Complex scalar field on a grid.
struct ScalarField {
  Grid grid;
  std::vector<cplx> values;

  explicit ScalarField(const Grid& g) : grid(g), values(g.size()) {}
  ScalarField(const Grid& g, std::vector<cplx> v);

  static ScalarField from_function(const Grid& g, const std::function<cplx(const Vec3&)>& fn);

  std::size_t size() const { return values.size(); }
  cplx& operator[](std::size_t i) { return values[i]; }
  const cplx& operator[](std::size_t i) const { return values[i]; }
};

/// Hermitian 4x4 matrix potential with declared decay |q_jk(x)| <= c_q <x>^{-rho}.
struct MatrixPotential {
  Grid grid;
  std::vector<Matrix4> values;
  double rho = 0.0;
  double c_q = 0.0;

  explicit MatrixPotential(const Grid& g) : grid(g), values(g.size()) {}

  static MatrixPotential from_function(const Grid& g, const std::function<Matrix4(const Vec3&)>& fn,
                                       double rho, double c_q);

  /// Largest |Q - Q^*| entry over the grid.
  double hermiticity_defect() const;
  /// Largest ratio |q_jk(x)| <x>^rho / c_q over the grid (<= 1 when the declaration holds).
  double decay_ratio() const;

  MatrixPotential scaled(double c) const;
};

/// Weight exponent s for <x>^s.
struct WeightSpec {
  double s = 0.0;
};

/// Pointwise Q f.
SpinorField apply_potential(const MatrixPotential& q, const SpinorField& f);

/// Pointwise |f(x)| as a scalar field.
ScalarField magnitude(const SpinorField& f);

/// Subtract the grid average of each component.
SpinorField mean_free(const SpinorField& f);

/// Component-wise grid average.
Spinor4 mean(const SpinorField& f);

/// Discrete L2 inner product with volume element h^3.
cplx inner(const SpinorField& a, const SpinorField& b);

void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace dzm
