#include "dzm/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>
#include <string>

namespace dzm {

Matrix2 pauli(int j) {
  Matrix2 m;
  switch (j) {
    case 1:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case 2:
      m(0, 1) = -kI;
      m(1, 0) = kI;
      break;
    case 3:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    default:
      throw std::out_of_range("pauli: index must be 1, 2 or 3, got " + std::to_string(j));
  }
  return m;
}

Matrix4 dirac_alpha(int j) {
  const Matrix2 s = pauli(j);
  Matrix4 m;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) {
      m(r, c + 2) = s(r, c);
      m(r + 2, c) = s(r, c);
    }
  return m;
}

Matrix4 dirac_beta() {
  Matrix4 m;
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 2) = -1.0;
  m(3, 3) = -1.0;
  return m;
}

namespace {

// sigma.v applied to (a, b), v possibly complex
template <class T>
inline void sigma_apply(const T& v0, const T& v1, const T& v2, const cplx& a, const cplx& b, cplx& ra,
                        cplx& rb) {
  // [[v3, v1 - i v2], [v1 + i v2, -v3]]
  const cplx vm = cplx(v0) - kI * cplx(v1);
  const cplx vp = cplx(v0) + kI * cplx(v1);
  ra = cplx(v2) * a + vm * b;
  rb = vp * a - cplx(v2) * b;
}

}  // namespace

Spinor4 alpha_dot(const Vec3& v, const Spinor4& s) {
  Spinor4 r;
  // upper = sigma.v lower, lower = sigma.v upper
  sigma_apply(v[0], v[1], v[2], s[2], s[3], r[0], r[1]);
  sigma_apply(v[0], v[1], v[2], s[0], s[1], r[2], r[3]);
  return r;
}

Spinor4 alpha_dot(const std::array<cplx, 3>& v, const Spinor4& s) {
  Spinor4 r;
  sigma_apply(v[0], v[1], v[2], s[2], s[3], r[0], r[1]);
  sigma_apply(v[0], v[1], v[2], s[0], s[1], r[2], r[3]);
  return r;
}

Spinor2 sigma_dot(const Vec3& v, const Spinor2& s) {
  Spinor2 r;
  sigma_apply(v[0], v[1], v[2], s[0], s[1], r[0], r[1]);
  return r;
}

Matrix4 alpha_dot_matrix(const Vec3& v) {
  Matrix4 m;
  for (int j = 1; j <= 3; ++j) m += cplx(v[j - 1]) * dirac_alpha(j);
  return m;
}

double operator_norm(const Matrix4& m) {
  Eigen::Matrix4cd a;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) a(r, c) = m(r, c);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace dzm
