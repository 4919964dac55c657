#include <cmath>
#include <numbers>

#include "doctest.h"
#include "majsim/momentum_dynamics.hpp"
#include "majsim/oracle_integrator.hpp"
#include "majsim/rest_dynamics.hpp"
#include "test_support.hpp"

using namespace majsim;
using majsim::testing::kI;
using majsim::testing::Random;

namespace {

constexpr double kPi = std::numbers::pi;

// Centered first difference of one slot of a mode-pair trajectory.
Spinor2 time_derivative(const MomentumModePair& pair, const PhysParams& params, double t, double h,
                        bool plus) {
  const MomentumModePair a = majorana_mode_evolve(pair, params, t + h);
  const MomentumModePair b = majorana_mode_evolve(pair, params, t - h);
  return (0.5 / h) * (plus ? a.plus() - b.plus() : a.minus() - b.minus());
}

}  // namespace

TEST_CASE("omega_p examples") {
  const PhysParams natural;
  CHECK(omega_p(0.0, natural).omega_p == natural.omega());
  CHECK(omega_p(0.0, PhysParams(2.0, 0.5, 3.0)).omega_p == doctest::Approx(36.0).epsilon(1e-15));
  CHECK(omega_p(-3.0, PhysParams(0.0, 1.0, 2.0)).omega_p == 6.0);
  // sqrt(2) to 17 digits (arbitrary-precision value 1.41421356237309504880...).
  CHECK(omega_p(1.0, natural).omega_p == doctest::Approx(1.4142135623730951).epsilon(1e-16));
  CHECK(std::abs(omega_p(1.0, natural).omega_p - 1.4142135624) < 1e-10);
  // No overflow for extreme momenta.
  CHECK(std::isfinite(omega_p(1e200, natural).omega_p));
}

TEST_CASE("omega_p bounds") {
  Random rng(31);
  for (int n = 0; n < 1000; ++n) {
    const PhysParams params(rng.uniform(0.0, 3.0), rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0));
    const double p = rng.uniform(-10.0, 10.0);
    const double w = omega_p(p, params).omega_p;
    REQUIRE(w >= params.omega() * (1.0 - 1e-15));
    REQUIRE(w >= std::abs(p) * params.c() / params.hbar() * (1.0 - 1e-15));
  }
}

TEST_CASE("MomentumModePair invariants") {
  CHECK_THROWS_AS(MomentumModePair(-1.0, {1.0, 0.0}, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(MomentumModePair(0.0, {1.0, 0.0}, {0.0, 1.0}), std::invalid_argument);
  const auto rest = MomentumModePair::rest({0.6, 0.8});
  CHECK(rest.plus() == rest.minus());
  CHECK(rest.norm_squared() == doctest::Approx(1.0));
  CHECK(MomentumModePair(1.0, {0.6, 0.8}, {1.0, 0.0}).norm_squared() == doctest::Approx(2.0));
}

TEST_CASE("majorana_mode_evolve examples") {
  const PhysParams natural;
  const auto at_quarter = majorana_mode_evolve(MomentumModePair::rest({1.0, 0.0}), natural, kPi / 2.0);
  CHECK(max_abs_diff(at_quarter.plus(), {0.0, -kI}) <= 1e-15);
  CHECK(at_quarter.plus() == at_quarter.minus());

  // m = 0, c p t / hbar = pi/2: oracle exp(-i (pi/2) sigma_x)(1, 0) = (0, -i).
  const PhysParams massless(0.0, 1.0, 1.0);
  const auto gen = majsim::testing::to_dense(cplx{0.0, -kPi / 2.0} * gamma::sigma_x);
  const Spinor2 expected = majsim::testing::apply(majsim::testing::dense_expm<2>(gen), {1.0, 0.0});
  CHECK(max_abs_diff(expected, {0.0, -kI}) <= 1e-14);
  const auto m0 = majorana_mode_evolve(MomentumModePair(1.0, {1.0, 0.0}, {0.0, 1.0}), massless, kPi / 2.0);
  CHECK(max_abs_diff(m0.plus(), expected) <= 1e-14);

  // Random pair against the RK4 mode-pair oracle.
  Random rng(32);
  const MomentumModePair pair(1.0, rng.spinor(), rng.spinor());
  const auto exact = majorana_mode_evolve(pair, natural, 0.7);
  const auto integrated = oracle::integrate_mode_pair(pair, natural, 0.7, {.dt = 1e-3});
  CHECK(max_abs_diff(exact.plus(), integrated.plus()) <= 1e-8);
  CHECK(max_abs_diff(exact.minus(), integrated.minus()) <= 1e-8);
}

TEST_CASE("majorana_mode_evolve reduces to the rest closed form at p = 0") {
  Random rng(33);
  const PhysParams params(1.4, 0.8, 1.2);
  for (int n = 0; n < 1000; ++n) {
    const Spinor2 s = rng.spinor();
    const double t = rng.uniform(-10.0, 10.0);
    REQUIRE(max_abs_diff(majorana_mode_evolve(MomentumModePair::rest(s), params, t).plus(),
                         majorana_rest_evolve(s, params, t)) <= 1e-12);
    REQUIRE(max_abs_diff(dirac_mode_evolve(s, 0.0, params, t), dirac_rest_evolve(s, params, t)) <= 1e-12);
  }
}

TEST_CASE("majorana mode pair satisfies its first-order equations") {
  Random rng(34);
  const PhysParams params(1.0, 1.0, 1.0);
  const MomentumModePair pair(0.8, rng.spinor(), rng.spinor());
  const double h = 1e-4;
  const double hbar = params.hbar();
  const double cp = params.c() * pair.p();
  const double mc2 = params.mass();
  for (double t : {0.0, 0.3, 1.7, -2.2}) {
    const auto now = majorana_mode_evolve(pair, params, t);
    // i hbar d/dt psi_p = c p sigma_x psi_p - i m c^2 sigma_y psi_-p^*
    const Spinor2 lhs = (kI * hbar) * time_derivative(pair, params, t, h, true);
    const Spinor2 rhs = cp * (gamma::sigma_x * now.plus()) - (kI * mc2) * (gamma::sigma_y * conj(now.minus()));
    CHECK(max_abs_diff(lhs, rhs) <= 1e-7);
    // Conjugate-swapped form: -i hbar d/dt psi_-p^* = -c p sigma_x psi_-p^* - i m c^2 sigma_y psi_p
    const Spinor2 lhs_swap = (-kI * hbar) * conj(time_derivative(pair, params, t, h, false));
    const Spinor2 rhs_swap = -cp * (gamma::sigma_x * conj(now.minus())) - (kI * mc2) * (gamma::sigma_y * now.plus());
    CHECK(max_abs_diff(lhs_swap, rhs_swap) <= 1e-7);
  }
}

TEST_CASE("conjugate-swap residual is second order in the step") {
  const PhysParams params;
  const MomentumModePair pair(1.3, {cplx{0.2, 0.1}, cplx{-0.4, 0.3}}, {cplx{0.5, -0.2}, cplx{0.1, 0.6}});
  const double t = 0.9;
  const auto now = majorana_mode_evolve(pair, params, t);
  const double cp = params.c() * pair.p();
  auto residual = [&](double h) {
    const Spinor2 lhs = (-kI) * conj(time_derivative(pair, params, t, h, false));
    const Spinor2 rhs = -cp * (gamma::sigma_x * conj(now.minus())) - kI * (gamma::sigma_y * now.plus());
    return norm(lhs - rhs);
  };
  const double ratio = residual(1e-2) / residual(5e-3);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("mode pair norm is conserved") {
  Random rng(35);
  for (int n = 0; n < 2000; ++n) {
    const PhysParams params(rng.uniform(0.0, 2.0), 1.0, 1.0);
    const MomentumModePair pair(rng.uniform(0.0, 5.0), rng.spinor(), rng.spinor());
    const double t = rng.uniform(-10.0, 10.0);
    REQUIRE(std::abs(majorana_mode_evolve(pair, params, t).norm_squared() - pair.norm_squared()) <= 1e-12);
  }
}

TEST_CASE("dirac_mode_evolve examples") {
  const PhysParams natural;
  const PhysParams massless(0.0, 1.0, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  for (double t : {0.0, 0.4, -3.0, 11.0}) {
    const Spinor2 got = dirac_mode_evolve({r, r}, 2.0, massless, t);
    CHECK(max_abs_diff(got, std::exp(-kI * 2.0 * t) * Spinor2{r, r}) <= 1e-14);
  }
  Random rng(36);
  const Spinor2 s = rng.spinor();
  const Spinor2 integrated = oracle::integrate_dirac_mode(s, 1.0, natural, 0.9, {.dt = 1e-3});
  CHECK(max_abs_diff(dirac_mode_evolve(s, 1.0, natural, 0.9), integrated) <= 1e-8);
}

TEST_CASE("dirac mode propagator is unitary") {
  Random rng(37);
  for (int n = 0; n < 2000; ++n) {
    const PhysParams params(rng.uniform(0.0, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0));
    const Matrix2 u = dirac_mode_propagator(rng.uniform(-5.0, 5.0), params, rng.uniform(-10.0, 10.0));
    REQUIRE(max_abs_diff(u.adjoint() * u, Matrix2::identity()) <= 1e-12);
  }
}

TEST_CASE("ultrarelativistic_approx examples") {
  const PhysParams massless(0.0, 1.0, 1.0);
  Random rng(38);
  for (int n = 0; n < 200; ++n) {
    const Spinor2 a = rng.spinor();
    const Spinor2 b = rng.spinor();
    const double p = rng.uniform(0.01, 50.0);
    const double t = rng.uniform(-5.0, 5.0);
    const Spinor2 ultra = ultrarelativistic_approx(a, p, massless, t);
    REQUIRE(max_abs_diff(ultra, majorana_mode_evolve(MomentumModePair(p, a, b), massless, t).plus()) <= 1e-12);
    REQUIRE(max_abs_diff(ultra, dirac_mode_evolve(a, p, massless, t)) <= 1e-12);
  }

  CHECK(max_abs_diff(ultrarelativistic_approx({1.0, 0.0}, kPi, PhysParams(), 1.0), {-1.0, 0.0}) <= 1e-15);
  CHECK_THROWS_AS(ultrarelativistic_approx({1.0, 0.0}, 0.0, PhysParams(), 1.0), std::invalid_argument);
}

TEST_CASE("massless propagator approaches the massive Majorana solution") {
  const PhysParams natural;
  const Spinor2 a{1.0, 0.0};
  const Spinor2 b{0.0, 1.0};
  auto deviation = [&](double p, double t) {
    const auto exact = majorana_mode_evolve(MomentumModePair(p, a, b), natural, t);
    return norm(exact.plus() - ultrarelativistic_approx(a, p, natural, t));
  };
  CHECK(deviation(100.0, 1.0) <= 1e-2);
  CHECK(deviation(1000.0, 1.0) < deviation(100.0, 1.0));
  // Inside 0.1 x the window of the smallest momentum.
  const double t = kUltraValidityFraction * validity_window(10.0, natural);
  CHECK(deviation(10.0, t) > deviation(100.0, t));
  CHECK(deviation(100.0, t) > deviation(1000.0, t));
}

TEST_CASE("validity_window") {
  const PhysParams natural;
  CHECK(validity_window(1.0, natural) == 2.0);
  CHECK(validity_window(-1.0, natural) == 2.0);
  CHECK(is_unbounded(validity_window(3.0, PhysParams(0.0, 1.0, 1.0))));
  CHECK(validity_window(6.0, natural) == 2.0 * validity_window(3.0, natural));
  CHECK(validity_window(1.0, PhysParams(2.0, 3.0, 0.5)) == doctest::Approx(2.0 * 3.0 / (4.0 * 0.125)));
}

TEST_CASE("klein_gordon_residual") {
  const PhysParams natural;
  const MomentumModePair pair(1.0, {cplx{0.3, 0.2}, cplx{-0.1, 0.5}}, {cplx{0.6, 0.0}, cplx{0.2, -0.4}});
  const ModeTrajectory majorana = [&](double t) { return majorana_mode_evolve(pair, natural, t).plus(); };
  const ModeTrajectory dirac = [&](double t) { return dirac_mode_evolve(pair.plus(), 1.0, natural, t); };

  for (const ModeTrajectory* traj : {&majorana, &dirac}) {
    const auto check = klein_gordon_check(*traj, 1.0, natural, 0.5, 1e-3);
    CHECK(check.residual <= 1e-4);
    CHECK(check.ratio == doctest::Approx(4.0).epsilon(0.125));
    CHECK(check.consistent);
  }

  // Frozen state with m > 0: only the mass term survives.
  const Spinor2 frozen{0.6, 0.8};
  const ModeTrajectory still = [&](double) { return frozen; };
  const PhysParams heavy(2.0, 1.0, 1.0);
  CHECK(klein_gordon_residual(still, 0.0, heavy, 0.5, 1e-3) == doctest::Approx(4.0 * norm(frozen)));
  CHECK_FALSE(klein_gordon_check(still, 0.0, heavy, 0.5, 1e-3).consistent);

  CHECK_THROWS_AS(klein_gordon_residual(majorana, 1.0, natural, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(klein_gordon_residual(majorana, 1.0, natural, 0.5, -1e-3), std::invalid_argument);
}
