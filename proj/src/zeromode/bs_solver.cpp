#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "dzm/norms.hpp"
#include "dzm/spectral.hpp"
#include "dzm/zeromode.hpp"

namespace dzm {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// LAPACK zlartg: [c s; -conj(s) c] [f; g] = [r; 0].
void givens(cplx f, cplx g, double& c, cplx& s) {
  if (g == cplx{}) {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (f == cplx{}) {
    c = 0.0;
    s = std::conj(g) / std::abs(g);
    return;
  }
  const double fa = std::abs(f), nrm = std::hypot(fa, std::abs(g));
  c = fa / nrm;
  s = (f / fa) * std::conj(g) / nrm;
}

// Swap diagonal entries k, k+1 of the upper-triangular T, updating Schur vectors Z.
void swap_adjacent(MatrixXcd& T, MatrixXcd& Z, Index k) {
  const Index n = T.rows();
  const cplx t11 = T(k, k), t22 = T(k + 1, k + 1);
  double c;
  cplx s;
  givens(T(k, k + 1), t22 - t11, c, s);
  for (Index j = k + 2; j < n; ++j) {
    const cplx x = T(k, j), y = T(k + 1, j);
    T(k, j) = c * x + s * y;
    T(k + 1, j) = c * y - std::conj(s) * x;
  }
  const cplx sc = std::conj(s);
  for (Index i = 0; i < k; ++i) {
    const cplx x = T(i, k), y = T(i, k + 1);
    T(i, k) = c * x + sc * y;
    T(i, k + 1) = c * y - std::conj(sc) * x;
  }
  T(k, k) = t22;
  T(k + 1, k + 1) = t11;
  for (Index i = 0; i < Z.rows(); ++i) {
    const cplx x = Z(i, k), y = Z(i, k + 1);
    Z(i, k) = c * x + sc * y;
    Z(i, k + 1) = c * y - std::conj(sc) * x;
  }
}

// Move the p largest-modulus eigenvalues to the leading block, in decreasing modulus.
void order_schur(MatrixXcd& T, MatrixXcd& Z, Index p) {
  const Index n = T.rows();
  for (Index pos = 0; pos < std::min(p, n); ++pos) {
    Index best = pos;
    for (Index j = pos + 1; j < n; ++j)
      if (std::abs(T(j, j)) > std::abs(T(best, best))) best = j;
    for (Index j = best; j > pos; --j) swap_adjacent(T, Z, j - 1);
  }
}

class ComposedOperator {
 public:
  explicit ComposedOperator(const MatrixPotential& q) : q_(q), n_(q.grid.size() * 4) {}

  Index size() const { return static_cast<Index>(n_); }
  int count() const { return count_; }

  VectorXcd apply(const VectorXcd& x) {
    ++count_;
    SpinorField f(q_.grid);
    std::copy(x.data(), x.data() + x.size(), f.flat().begin());
    const SpinorField y = apply_A(apply_potential(q_, f));
    VectorXcd out(x.size());
    std::copy(y.flat().begin(), y.flat().end(), out.data());
    return out;
  }

 private:
  const MatrixPotential& q_;
  std::size_t n_;
  int count_ = 0;
};

// Two passes of classical Gram-Schmidt against the columns of B; returns coefficients.
VectorXcd orthogonalize(const Eigen::Ref<const MatrixXcd>& B, VectorXcd& w) {
  VectorXcd h = VectorXcd::Zero(B.cols());
  if (B.cols() == 0) return h;
  for (int pass = 0; pass < 2; ++pass) {
    const VectorXcd c = B.adjoint() * w;
    w -= B * c;
    h += c;
  }
  return h;
}

VectorXcd random_start(const Grid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  SpinorField f(grid);
  for (auto& v : f.values)
    for (int c = 0; c < 4; ++c) v[c] = {nd(rng), nd(rng)};
  f = mean_free(f);
  VectorXcd x(static_cast<Index>(grid.size() * 4));
  std::copy(f.flat().begin(), f.flat().end(), x.data());
  return x;
}

SpinorField to_field(const Grid& grid, const VectorXcd& x) {
  SpinorField f(grid);
  std::copy(x.data(), x.data() + x.size(), f.flat().begin());
  return f;
}

}  // namespace

BsResult bs_solver(const MatrixPotential& q, int k, const BsOptions& opts) {
  if (k < 1) throw ConstraintError("bs_solver needs k >= 1");
  if (q.hermiticity_defect() > 1e-12) throw ConstraintError("bs_solver needs a Hermitian potential");
  const int m = opts.krylov_dim > 0 ? opts.krylov_dim : std::max(2 * k + 8, 20);
  if (m <= k + 1) throw ConstraintError("Krylov dimension must exceed k + 1");

  ComposedOperator op(q);
  const Index n = op.size();
  std::mt19937_64 rng(opts.seed);

  MatrixXcd locked(n, 0);
  std::vector<cplx> locked_values;
  bool exhausted = false;

  auto deflated = [&](const VectorXcd& x) {
    VectorXcd y = op.apply(x);
    if (locked.cols() > 0) y -= locked * (locked.adjoint() * y);
    return y;
  };

  while (static_cast<int>(locked.cols()) < k && op.count() < opts.budget && !exhausted) {
    const int want = k - static_cast<int>(locked.cols());
    MatrixXcd V(n, m + 1);
    MatrixXcd H = MatrixXcd::Zero(m + 1, m);
    VectorXcd v0 = random_start(q.grid, rng);
    orthogonalize(locked, v0);
    V.col(0) = v0 / v0.norm();
    Index p = 0;
    bool locked_any = false;

    while (!locked_any && op.count() < opts.budget) {
      Index msz = m;
      bool breakdown = false;
      for (Index j = p; j < m; ++j) {
        VectorXcd w = deflated(V.col(j));
        const double scale = w.norm();
        orthogonalize(locked, w);
        const VectorXcd h = orthogonalize(V.leftCols(j + 1), w);
        H.col(j).head(j + 1) += h;
        const double beta = w.norm();
        H(j + 1, j) = beta;
        if (beta <= 1e-12 * std::max(scale, 1e-300) || beta == 0.0) {
          msz = j + 1;
          breakdown = true;
          H(j + 1, j) = 0.0;
          break;
        }
        V.col(j + 1) = w / beta;
        if (op.count() >= opts.budget) {
          msz = j + 1;
          break;
        }
      }

      Eigen::ComplexSchur<MatrixXcd> schur(H.topLeftCorner(msz, msz));
      MatrixXcd T = schur.matrixT();
      MatrixXcd Z = schur.matrixU();
      T.triangularView<Eigen::StrictlyLower>().setZero();
      order_schur(T, Z, msz);
      const Eigen::RowVectorXcd b = H.row(msz).head(msz) * Z;

      double top = 0.0;
      for (Index i = 0; i < msz; ++i) top = std::max(top, std::abs(T(i, i)));
      if (top <= 1e-12) {
        exhausted = true;  // operator vanishes on the remaining subspace
        break;
      }

      Index conv = 0;
      while (conv < std::min<Index>(want, msz) &&
             std::abs(b(conv)) <= opts.tolerance * std::max(std::abs(T(conv, conv)), 1e-12 * top))
        ++conv;
      if (breakdown) conv = std::min<Index>(want, msz);
      if (conv > 0) {
        MatrixXcd U = V.leftCols(msz) * Z.leftCols(conv);
        for (Index c = 0; c < conv; ++c) {
          VectorXcd u = U.col(c);
          orthogonalize(locked, u);
          const double un = u.norm();
          if (un < 1e-8) continue;
          locked.conservativeResize(Eigen::NoChange, locked.cols() + 1);
          locked.col(locked.cols() - 1) = u / un;
          locked_values.push_back(T(c, c));
        }
        locked_any = true;
        break;
      }
      if (breakdown) break;

      // Krylov-Schur restart on the leading Schur vectors
      p = std::min<Index>(msz - 1, want + (m - want) / 2);
      MatrixXcd Vp = V.leftCols(msz) * Z.leftCols(p);
      V.leftCols(p) = Vp;
      V.col(p) = V.col(msz);
      H.setZero();
      H.topLeftCorner(p, p) = T.topLeftCorner(p, p);
      H.row(p).head(p) = b.head(p);
    }
  }

  BsResult result;
  result.seed = opts.seed;
  const Index K = locked.cols();
  if (K > 0) {
    MatrixXcd AQ(n, K);
    for (Index c = 0; c < K; ++c) AQ.col(c) = op.apply(locked.col(c));
    const MatrixXcd Tk = locked.adjoint() * AQ;
    Eigen::ComplexEigenSolver<MatrixXcd> es(Tk);
    for (Index i = 0; i < K; ++i) {
      const cplx mu = es.eigenvalues()(i);
      if (std::abs(mu) <= 1e-12) continue;
      VectorXcd y = es.eigenvectors().col(i);
      VectorXcd x = locked * y;
      const double xn = x.norm();
      x /= xn;
      y /= xn;
      const double res = (AQ * y - mu * x).norm() / std::abs(mu);
      BsEigenpair pair{mu, -1.0 / mu, res, 0.0, to_field(q.grid, x)};
      // normalize in the h^3 inner product
      const double fn = l2_norm(pair.field);
      pair.field *= 1.0 / fn;
      pair.defect = fixed_point_defect(pair.field, q, pair.coupling);
      result.pairs.push_back(std::move(pair));
    }
  }
  auto key = [](const BsEigenpair& p) { return std::llround(std::abs(p.mu) * 1e8); };
  std::stable_sort(result.pairs.begin(), result.pairs.end(), [&](const BsEigenpair& a, const BsEigenpair& b) {
    if (key(a) != key(b)) return key(a) > key(b);
    return a.mu.real() < b.mu.real();
  });
  if (static_cast<int>(result.pairs.size()) > k) result.pairs.erase(result.pairs.begin() + k, result.pairs.end());
  result.matvecs = op.count();
  result.converged = exhausted || static_cast<int>(K) >= k;
  for (const auto& p : result.pairs)
    if (p.residual > 1e3 * opts.tolerance) result.converged = false;
  return result;
}

double subspace_cosine(const SpinorField& f, const std::vector<const SpinorField*>& basis) {
  if (basis.empty()) return 0.0;
  const Index n = static_cast<Index>(f.size() * 4);
  MatrixXcd B(n, static_cast<Index>(basis.size()));
  for (std::size_t c = 0; c < basis.size(); ++c) {
    require_same_grid(f.grid, basis[c]->grid, "subspace_cosine");
    std::copy(basis[c]->flat().begin(), basis[c]->flat().end(), B.col(static_cast<Index>(c)).data());
  }
  Eigen::HouseholderQR<MatrixXcd> qr(B);
  const MatrixXcd Qm = qr.householderQ() * MatrixXcd::Identity(n, B.cols());
  VectorXcd x(n);
  std::copy(f.flat().begin(), f.flat().end(), x.data());
  const double xn = x.norm();
  if (!(xn > 0.0)) throw ConstraintError("zero field");
  return (Qm.adjoint() * x).norm() / xn;
}

}  // namespace dzm
