#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace dzm {

using cplx = std::complex<double>;
inline constexpr cplx kI{0.0, 1.0};

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

/// Japanese bracket (1 + |x|^2)^{1/2}.
inline double bracket(const Vec3& x) { return std::sqrt(1.0 + dot(x, x)); }

template <std::size_t N>
struct Spinor {
  std::array<cplx, N> c{};

  cplx& operator[](std::size_t i) { return c[i]; }
  const cplx& operator[](std::size_t i) const { return c[i]; }

  Spinor& operator+=(const Spinor& o) {
    for (std::size_t i = 0; i < N; ++i) c[i] += o.c[i];
    return *this;
  }
  Spinor& operator-=(const Spinor& o) {
    for (std::size_t i = 0; i < N; ++i) c[i] -= o.c[i];
    return *this;
  }
  Spinor& operator*=(cplx s) {
    for (auto& v : c) v *= s;
    return *this;
  }
  friend Spinor operator+(Spinor a, const Spinor& b) { return a += b; }
  friend Spinor operator-(Spinor a, const Spinor& b) { return a -= b; }
  friend Spinor operator*(cplx s, Spinor a) { return a *= s; }
  friend bool operator==(const Spinor&, const Spinor&) = default;

  double norm_sq() const {
    double s = 0.0;
    for (const auto& v : c) s += std::norm(v);
    return s;
  }
  double norm() const { return std::sqrt(norm_sq()); }
};

using Spinor2 = Spinor<2>;
using Spinor4 = Spinor<4>;
static_assert(sizeof(Spinor4) == 4 * sizeof(cplx), "Spinor4 must be layout-compatible with cplx[4]");

template <std::size_t N>
cplx inner(const Spinor<N>& a, const Spinor<N>& b) {
  cplx s{};
  for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// Fixed-size complex square matrix, row-major.
template <std::size_t N>
struct Matrix {
  std::array<cplx, N * N> e{};

  cplx& operator()(std::size_t r, std::size_t c) { return e[r * N + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return e[r * N + c]; }

  static Matrix identity() {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }
  static Matrix zero() { return Matrix{}; }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t i = 0; i < N * N; ++i) e[i] += o.e[i];
    return *this;
  }
  Matrix& operator*=(cplx s) {
    for (auto& v : e) v *= s;
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < N * N; ++i) a.e[i] -= b.e[i];
    return a;
  }
  friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }
  friend Spinor<N> operator*(const Matrix& a, const Spinor<N>& s) {
    Spinor<N> r;
    for (std::size_t i = 0; i < N; ++i) {
      cplx acc{};
      for (std::size_t j = 0; j < N; ++j) acc += a(i, j) * s[j];
      r[i] = acc;
    }
    return r;
  }
  friend bool operator==(const Matrix&, const Matrix&) = default;

  Matrix adjoint() const {
    Matrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }
  /// Largest entry magnitude.
  double max_abs() const {
    double m = 0.0;
    for (const auto& v : e) m = std::max(m, std::abs(v));
    return m;
  }
};

using Matrix2 = Matrix<2>;
using Matrix4 = Matrix<4>;

/// Pauli matrix sigma_j, j in {1,2,3}. Throws std::out_of_range otherwise.
Matrix2 pauli(int j);

/// Dirac matrix alpha_j = [[0, sigma_j], [sigma_j, 0]], j in {1,2,3}.
Matrix4 dirac_alpha(int j);

/// beta = diag(I2, -I2).
Matrix4 dirac_beta();

/// sum_j v_j alpha_j s, evaluated without building the 4x4 matrix.
Spinor4 alpha_dot(const Vec3& v, const Spinor4& s);

/// Complex-coefficient variant used by Fourier multipliers.
Spinor4 alpha_dot(const std::array<cplx, 3>& v, const Spinor4& s);

/// sum_j v_j sigma_j s for 2-spinors.
Spinor2 sigma_dot(const Vec3& v, const Spinor2& s);

/// The matrix sum_j v_j alpha_j.
Matrix4 alpha_dot_matrix(const Vec3& v);

/// Spectral (operator 2-)norm of a 4x4 matrix, via the largest eigenvalue of M^* M.
double operator_norm(const Matrix4& m);

}  // namespace dzm
