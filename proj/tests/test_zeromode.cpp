#include <doctest.h>

#include <random>

#include "dzm/norms.hpp"
#include "dzm/spectral.hpp"
#include "dzm/zeromode.hpp"
#include "oracles.hpp"

using namespace dzm;
using oracle::pi;

TEST_CASE("loss-yau closed forms") {
  const Grid g(32, 8.0);
  for (const Vec3& w : {Vec3{0, 0, 1}, Vec3{1, 0, 0}, Vec3{0.6, 0, 0.8}}) {
    const Spinor2 phi = spin_up(w);
    CHECK(phi.norm() == doctest::Approx(1.0).epsilon(1e-15));
    // phi0 is the +1 eigenvector of sigma.w
    CHECK((sigma_dot(w, phi) - phi).norm() < 1e-15);
    CHECK(loss_yau_psi({0, 0, 0}, w) == phi);
    double worst = 0.0, worst_num = 0.0;
    for (std::size_t i = 0; i < g.size(); i += 7) {
      const Vec3 x = g.point(i);
      const double r2 = dot(x, x);
      const Spinor2 psi = loss_yau_psi(x, w);
      worst = std::max(worst, std::abs(psi.norm_sq() - 1 / ((1 + r2) * (1 + r2))));
      const auto num = oracle::loss_yau_numerator(x, phi[0], phi[1]);
      const double s = std::pow(1 + r2, -1.5);
      worst_num = std::max(worst_num, std::abs(psi[0] - s * num[0]) + std::abs(psi[1] - s * num[1]));
    }
    CHECK(worst < 1e-12);
    CHECK(worst_num < 1e-15);
  }
  CHECK_THROWS_AS(loss_yau_fixture(g, {1, 1, 0}), ConstraintError);
}

TEST_CASE("fixture potential is hermitian and decays as declared") {
  const auto fx = loss_yau_fixture(Grid(32, 8.0), {0, 0, 1});
  CHECK(fx.q.hermiticity_defect() <= 1e-12);
  CHECK(fx.q.decay_ratio() <= 1.0 + 1e-12);
  CHECK(fx.rho == 2.0);
  CHECK(fx.tag == "loss-yau");
  const auto lower = loss_yau_fixture(Grid(32, 8.0), {0, 0, 1}, Embedding::lower);
  CHECK(lower.f[0][0] == cplx(0));
  CHECK(lower.tag == "loss-yau-lower");
  CHECK(residual(lower) == doctest::Approx(residual(fx)).epsilon(1e-10));
}

TEST_CASE("weyl equation holds pointwise in the interior") {
  // sigma.D psi = 3 <x>^{-2} psi, with D = -i grad applied spectrally
  const Grid g(96, 12.0);
  const Vec3 w{0, 0, 1};
  ScalarField c0 = ScalarField::from_function(g, [&](const Vec3& x) { return loss_yau_psi(x, w)[0]; });
  ScalarField c1 = ScalarField::from_function(g, [&](const Vec3& x) { return loss_yau_psi(x, w)[1]; });
  std::array<ScalarField, 3> d0{apply_derivative(c0, 0), apply_derivative(c0, 1), apply_derivative(c0, 2)};
  std::array<ScalarField, 3> d1{apply_derivative(c1, 0), apply_derivative(c1, 1), apply_derivative(c1, 2)};
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.point(i);
    if (norm(x) > 3.0) continue;
    // sigma.D applied to (c0, c1)
    const cplx s0 = d0[2][i] + d1[0][i] - cplx(0, 1) * d1[1][i];
    const cplx s1 = d0[0][i] + cplx(0, 1) * d0[1][i] - d1[2][i];
    const double lam = 3 / (1 + dot(x, x));
    worst = std::max(worst, std::abs(s0 - lam * c0[i]) + std::abs(s1 - lam * c1[i]));
  }
  MESSAGE("weyl defect for |x| <= 3: " << worst);
  CHECK(worst < 5e-3);
}

TEST_CASE("residual and defect on simple fields") {
  const Grid g(16, 3.0);
  const MatrixPotential none(g);
  const double dk = pi / g.half_width();
  const Vec3 k{dk, 2 * dk, 0};
  Spinor4 u0;
  u0[0] = 1.0;
  const SpinorField pw = SpinorField::from_function(g, [&](const Vec3& x) { return std::exp(cplx(0, dot(k, x))) * u0; });
  CHECK(residual(pw, none) == doctest::Approx(norm(k)).epsilon(1e-12));
  CHECK(fixed_point_defect(pw, none) == doctest::Approx(1.0).epsilon(1e-14));
  const SpinorField c = SpinorField::from_function(g, [&](const Vec3&) { return u0; });
  CHECK(residual(c, none) < 1e-14);
  CHECK_THROWS_AS(residual(SpinorField(g), none), ConstraintError);
  CHECK_THROWS_AS(fixed_point_defect(SpinorField(g), none), ConstraintError);
}

TEST_CASE("fixture residual and defect fall under refinement") {
  double prev_r = 1e9, prev_d = 1e9;
  for (auto [L, n] : {std::pair{8.0, 32}, std::pair{12.0, 48}, std::pair{16.0, 64}}) {
    const auto fx = loss_yau_fixture(Grid(n, L), {0, 0, 1});
    const double r = residual(fx), d = fixed_point_defect(fx);
    CHECK(r < prev_r);
    CHECK(d < prev_d);
    CHECK(d < 2 * r);
    prev_r = r;
    prev_d = d;
  }
}

TEST_CASE("decay fits") {
  const Grid g(64, 16.0);
  Spinor4 e1;
  e1[0] = 1.0;
  const SpinorField cubic =
      SpinorField::from_function(g, [&](const Vec3& x) { return cplx(std::pow(bracket(x), -3.0)) * e1; });
  CHECK(std::abs(decay_fit(cubic, 16.0 / 3, 8.0).exponent + 3.0) < 0.05);
  const SpinorField flat = SpinorField::from_function(g, [&](const Vec3&) { return e1; });
  CHECK(std::abs(decay_fit(flat, 16.0 / 3, 8.0).exponent) < 0.01);
  const auto fx = loss_yau_fixture(g, {0, 0, 1});
  const DecayFit d = decay_fit(fx.f, 16.0 / 3, 8.0);
  CHECK(std::abs(d.exponent + 2.0) < 0.15);
  CHECK(d.r_min < d.r_max);
  CHECK(d.bins >= 2);
  CHECK_THROWS_AS(decay_fit(fx.f, 5.0, 9.0), ConstraintError);
  CHECK_THROWS_AS(decay_fit(fx.f, 5.0, 5.1), ConstraintError);
  CHECK(weighted_sup(fx.f) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("bootstrap examples") {
  const auto t35 = bootstrap_trace(3.5);
  CHECK(t35.n_star == 1);
  REQUIRE(t35.steps.size() == 1);
  CHECK(t35.steps[0].exponent == 2.0);
  CHECK(t35.steps[0].branch == BootstrapBranch::saturated);

  const auto t2 = bootstrap_trace(2.0);
  CHECK(t2.n_star == 3);
  REQUIRE(t2.steps.size() == 3);
  CHECK(t2.steps[0].exponent == 1.0);
  CHECK(t2.steps[0].branch == BootstrapBranch::power);
  CHECK(t2.steps[1].exponent == 2.0);
  CHECK(t2.steps[1].branch == BootstrapBranch::log);
  CHECK(t2.steps[2].branch == BootstrapBranch::saturated);

  const auto t15 = bootstrap_trace(1.5);
  CHECK(t15.n_star == 5);
  REQUIRE(t15.steps.size() == 5);
  const double e[] = {0.5, 1.0, 1.5, 2.0, 2.0};
  for (int k = 0; k < 5; ++k) CHECK(t15.steps[k].exponent == e[k]);
  CHECK(t15.steps[3].branch == BootstrapBranch::log);
  CHECK(t15.steps[4].branch == BootstrapBranch::saturated);

  CHECK_THROWS_AS(bootstrap_trace(1.0), ConstraintError);
}

TEST_CASE("bootstrap agrees with the exponent recursion") {
  for (int i = 1; i <= 50; ++i) {
    const double rho = 1.0 + 3.0 * i / 50;
    const auto t = bootstrap_trace(rho);
    const auto ref = oracle::bootstrap_recursion(rho);
    CAPTURE(rho);
    REQUIRE(t.steps.size() == ref.size());
    CHECK(t.n_star == oracle::n_star(rho));
    for (std::size_t k = 0; k < ref.size(); ++k) {
      CHECK(t.steps[k].k == ref[k].k);
      CHECK(std::abs(t.steps[k].exponent - ref[k].e) <= 1e-12);
      CHECK(std::string(to_string(t.steps[k].branch)) == ref[k].branch);
    }
  }
}

TEST_CASE("resonance check") {
  const auto fx = loss_yau_fixture(Grid(32, 8.0), {0, 0, 1});
  const ResonanceReport r = resonance_check(fx, 0.5);
  CHECK(r.all_finite);
  CHECK(r.rho_hypothesis);
  CHECK(r.zero_mode_candidate);
  CHECK(r.sharp_bound_holds);
  CHECK(r.aqf <= r.sharp_bound);
  CHECK(r.h1 > 0);
  CHECK_THROWS_AS(resonance_check(fx, 0.0), ConstraintError);
  CHECK_THROWS_AS(resonance_check(fx, 1.2), ConstraintError);

  // <x>^{-1} e1 with Q = 0 is not in L2 and H0 does not annihilate it
  const Grid g(32, 8.0);
  ZeroModeFixture slow{SpinorField::from_function(g,
                                                  [](const Vec3& x) {
                                                    Spinor4 s;
                                                    s[0] = 1 / bracket(x);
                                                    return s;
                                                  }),
                       MatrixPotential(g), 2.0, 0.0, 1.0, "slow"};
  const ResonanceReport rs = resonance_check(slow, 0.5);
  CHECK_FALSE(rs.zero_mode_candidate);
  CHECK(rs.residual > 0.1);
}

TEST_CASE("solver on trivial and scaled potentials") {
  const Grid g(16, 6.0);
  const BsResult none = bs_solver(MatrixPotential(g), 2);
  CHECK(none.pairs.empty());
  CHECK(none.converged);

  const auto fx = loss_yau_fixture(g, {0, 0, 1});
  const BsResult a = bs_solver(fx.q, 2);
  const BsResult b = bs_solver(fx.q.scaled(2.5), 2);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  REQUIRE(a.pairs.size() == 2);
  REQUIRE(b.pairs.size() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(b.pairs[i].mu - 2.5 * a.pairs[i].mu) < 1e-6 * std::abs(b.pairs[i].mu));
    CHECK(std::abs(b.pairs[i].coupling - a.pairs[i].coupling / 2.5) < 1e-6 * std::abs(a.pairs[i].coupling));
    CHECK(a.pairs[i].residual < 1e-6);
    CHECK(l2_norm(a.pairs[i].field) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.pairs[i].defect < 1e-6);
  }
  CHECK(std::abs(a.pairs[0].mu) >= std::abs(a.pairs[1].mu) - 1e-8);

  const BsResult again = bs_solver(fx.q, 2);
  CHECK(again.pairs[0].mu == a.pairs[0].mu);
  CHECK_THROWS_AS(bs_solver(fx.q, 0), ConstraintError);
}
