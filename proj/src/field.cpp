#include "dzm/field.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "dzm/parallel.hpp"

namespace dzm {

Grid::Grid(int n, double half_width) : n_(n), L_(half_width) {
  if (n < 8 || n % 2 != 0)
    throw ConstraintError("grid: points per axis must be even and >= 8, got " + std::to_string(n));
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw ConstraintError("grid: half-width L must be positive");
}

double Grid::dual_spacing() const { return std::numbers::pi / L_; }

Vec3 Grid::point(std::size_t idx) const {
  const std::size_t n = static_cast<std::size_t>(n_);
  const int i = static_cast<int>(idx % n);
  const int j = static_cast<int>((idx / n) % n);
  const int k = static_cast<int>(idx / (n * n));
  return {coord(i), coord(j), coord(k)};
}

double Grid::frequency(int i) const { return dual_spacing() * signed_mode(i); }

Vec3 Grid::wavevector(std::size_t idx) const {
  const std::size_t n = static_cast<std::size_t>(n_);
  const int i = static_cast<int>(idx % n);
  const int j = static_cast<int>((idx / n) % n);
  const int k = static_cast<int>(idx / (n * n));
  return {frequency(i), frequency(j), frequency(k)};
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw ConstraintError(std::string(what) + ": fields live on different grids");
}

SpinorField::SpinorField(const Grid& g, std::vector<Spinor4> v) : grid(g), values(std::move(v)) {
  if (values.size() != g.size()) throw ConstraintError("spinor field: value count does not match grid");
}

SpinorField SpinorField::from_function(const Grid& g, const std::function<Spinor4(const Vec3&)>& fn) {
  SpinorField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = fn(g.point(i));
  return f;
}

SpinorField& SpinorField::operator+=(const SpinorField& o) {
  require_same_grid(grid, o.grid, "spinor +");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  return *this;
}

SpinorField& SpinorField::operator-=(const SpinorField& o) {
  require_same_grid(grid, o.grid, "spinor -");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
  return *this;
}

SpinorField& SpinorField::operator*=(cplx s) {
  for (auto& v : values) v *= s;
  return *this;
}

ScalarField::ScalarField(const Grid& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
  if (values.size() != g.size()) throw ConstraintError("scalar field: value count does not match grid");
}

ScalarField ScalarField::from_function(const Grid& g, const std::function<cplx(const Vec3&)>& fn) {
  ScalarField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = fn(g.point(i));
  return f;
}

MatrixPotential MatrixPotential::from_function(const Grid& g, const std::function<Matrix4(const Vec3&)>& fn,
                                               double rho, double c_q) {
  MatrixPotential q(g);
  for (std::size_t i = 0; i < g.size(); ++i) q.values[i] = fn(g.point(i));
  q.rho = rho;
  q.c_q = c_q;
  return q;
}

double MatrixPotential::hermiticity_defect() const {
  double d = 0.0;
  for (const auto& m : values) d = std::max(d, (m - m.adjoint()).max_abs());
  return d;
}

double MatrixPotential::decay_ratio() const {
  if (!(c_q > 0.0)) return values.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  double r = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    r = std::max(r, values[i].max_abs() * std::pow(bracket(grid.point(i)), rho) / c_q);
  return r;
}

MatrixPotential MatrixPotential::scaled(double c) const {
  MatrixPotential q = *this;
  for (auto& m : q.values) m *= c;
  q.c_q = std::abs(c) * c_q;
  return q;
}

SpinorField apply_potential(const MatrixPotential& q, const SpinorField& f) {
  require_same_grid(q.grid, f.grid, "apply_potential");
  SpinorField out(f.grid);
  par::apply_potential(q.values, f.values, out.values);
  return out;
}

ScalarField magnitude(const SpinorField& f) {
  ScalarField m(f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) m[i] = f[i].norm();
  return m;
}

Spinor4 mean(const SpinorField& f) {
  Spinor4 s;
  for (const auto& v : f.values) s += v;
  s *= 1.0 / static_cast<double>(f.size());
  return s;
}

SpinorField mean_free(const SpinorField& f) {
  const Spinor4 m = mean(f);
  SpinorField out = f;
  for (auto& v : out.values) v -= m;
  return out;
}

cplx inner(const SpinorField& a, const SpinorField& b) {
  require_same_grid(a.grid, b.grid, "inner");
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += inner(a[i], b[i]);
  return s * a.grid.cell_volume();
}

}  // namespace dzm
