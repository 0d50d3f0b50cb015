#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dzm/field.hpp"

namespace dzm {

struct ZeroModeFixture {
  SpinorField f;
  MatrixPotential q;
  double rho = 0.0;
  double c_q = 0.0;
  double c_f = 0.0;
  std::string tag;
};

enum class Embedding { both, lower };  // (psi, psi) or (0, psi)

/// Spin-up 2-spinor along the unit vector w.
Spinor2 spin_up(const Vec3& w);

/// Loss-Yau 2-spinor psi(x) = (1 + |x|^2)^{-3/2} (I + i sigma.x) phi0.
Spinor2 loss_yau_psi(const Vec3& x, const Vec3& w);
/// Vector potential 3 (1 + |x|^2)^{-2} [(1 - |x|^2) w + 2 (w.x) x + 2 w x x].
Vec3 loss_yau_potential(const Vec3& x, const Vec3& w);

ZeroModeFixture loss_yau_fixture(const Grid& grid, const Vec3& w, Embedding e = Embedding::both);

/// ||H0 f + Q f|| / ||f||.
double residual(const SpinorField& f, const MatrixPotential& q);
double residual(const ZeroModeFixture& fix);

/// ||f + coupling * A(Q f)|| / ||f||; coupling 1 is the fixed point f = -A Q f.
double fixed_point_defect(const SpinorField& f, const MatrixPotential& q, cplx coupling = 1.0);
double fixed_point_defect(const ZeroModeFixture& fix);

struct DecayFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  double residual = 0.0;  // rms of the log fit
  int bins = 0;
};

DecayFit decay_fit(const SpinorField& f, double r_min, double r_max);

/// sup_x |f(x)| <x>^2 over the grid.
double weighted_sup(const SpinorField& f, double power = 2.0);

enum class BootstrapBranch { power, log, saturated };
const char* to_string(BootstrapBranch b);

struct BootstrapStep {
  int k = 0;
  double exponent = 0.0;
  BootstrapBranch branch = BootstrapBranch::power;
};

struct BootstrapTrace {
  double rho = 0.0;
  std::vector<BootstrapStep> steps;
  int n_star = 0;
};

BootstrapTrace bootstrap_trace(double rho);

struct ResonanceReport {
  double s = 0.0;
  double rho = 0.0;
  bool rho_hypothesis = false;   // rho > 3/2
  double weighted_f = 0.0;       // ||<x>^{-s} f||
  double weighted_qf = 0.0;      // ||<x>^{rho - s} Q f||
  double aqf = 0.0;              // ||A Q f||
  double h1 = 0.0;               // ||<D> f||
  double lemma_bound = 0.0;      // (1/2) ||<x> Q f||
  bool lemma_bound_holds = false;
  double sharp_bound = 0.0;      // 2 || |x| Q f ||
  bool sharp_bound_holds = false;
  bool all_finite = false;
  double residual = 0.0;
  double defect = 0.0;
  bool zero_mode_candidate = false;  // defect below 1/2
  bool consistent = false;           // all finite and lemma bound holds
};

ResonanceReport resonance_check(const ZeroModeFixture& fix, double s);

struct BsOptions {
  int budget = 500;          // operator applications
  double tolerance = 1e-8;   // relative Ritz residual
  int krylov_dim = 0;        // 0: max(2k + 8, 20)
  std::uint64_t seed = 7;
};

struct BsEigenpair {
  cplx mu{};
  cplx coupling{};
  double residual = 0.0;  // ||A Q x - mu x|| / |mu|
  double defect = 0.0;    // fixed_point_defect(x, Q, coupling)
  SpinorField field;
};

struct BsResult {
  std::vector<BsEigenpair> pairs;
  int matvecs = 0;
  bool converged = false;
  std::uint64_t seed = 0;
};

/// Leading eigenpairs (by |mu|) of f -> A(Q f) on mean-free fields.
BsResult bs_solver(const MatrixPotential& q, int k, const BsOptions& opts = {});

/// |cos| between f and the span of `basis` (orthonormalized internally).
double subspace_cosine(const SpinorField& f, const std::vector<const SpinorField*>& basis);

}  // namespace dzm
