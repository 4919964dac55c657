#include <cmath>
#include <numbers>

#include "doctest.h"
#include "majsim/ion_embedding.hpp"
#include "majsim/rest_dynamics.hpp"
#include "test_support.hpp"

using namespace majsim;
using majsim::testing::DenseMatrix;
using majsim::testing::kI;
using majsim::testing::Random;

namespace {

constexpr double kPi = std::numbers::pi;

// M = (I  iI) as an explicit 2x4 matrix, and M^dag A M by plain multiplication.
Matrix4 lift_by_multiplication(const Matrix2& a) {
  cplx m[2][4] = {{1.0, 0.0, kI, 0.0}, {0.0, 1.0, 0.0, kI}};
  Matrix4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      cplx s{};
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) s += std::conj(m[k][i]) * a(k, l) * m[l][j];
      out(i, j) = s;
    }
  return out;
}

// Oracle propagator exp(-i t (-m c^2 / hbar) sigma_x (x) sigma_y) by Taylor series.
DenseMatrix<4> propagator_by_expm(const PhysParams& params, double t) {
  DenseMatrix<4> gen = majsim::testing::kron(gamma::sigma_x, gamma::sigma_y);
  for (auto& row : gen)
    for (auto& z : row) z *= kI * params.omega() * t;
  return majsim::testing::dense_expm<4>(gen);
}

}  // namespace

TEST_CASE("encode and decode examples") {
  const RealSpinor4 e = encode({cplx{1.0, 2.0}, cplx{3.0, -1.0}});
  CHECK(e == RealSpinor4{{1.0, 3.0, 2.0, -1.0}});
  CHECK(encode({1.0, 0.0}) == RealSpinor4{{1.0, 0.0, 0.0, 0.0}});
  CHECK(decode(RealSpinor4{{1.0, 3.0, 2.0, -1.0}}) == Spinor2{cplx{1.0, 2.0}, cplx{3.0, -1.0}});
  CHECK(decode(RealSpinor4{{0.0, 0.0, 0.0, -1.0}}) == Spinor2{0.0, -kI});
}

TEST_CASE("encode and decode are inverse isometries") {
  Random rng(41);
  for (int n = 0; n < 10000; ++n) {
    const Spinor2 s = rng.spinor();
    REQUIRE(decode(encode(s)) == s);
    const RealSpinor4 r = rng.real_spinor4();
    REQUIRE(encode(decode(r)) == r);
    REQUIRE(std::abs(norm(decode(r)) - norm(r)) <= 1e-15);
  }
}

TEST_CASE("doubled propagator matches the matrix exponential") {
  Random rng(42);
  for (int n = 0; n < 50; ++n) {
    const PhysParams params(rng.uniform(0.0, 2.0), 1.0, 1.0);
    const double t = rng.uniform(-6.0, 6.0);
    const RealMatrix4 u = doubled_propagator(params, t);
    const DenseMatrix<4> oracle = propagator_by_expm(params, t);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        REQUIRE(std::abs(oracle[i][j].imag()) <= 1e-13);
        REQUIRE(std::abs(oracle[i][j].real() - u(i, j)) <= 1e-13);
      }
  }
}

TEST_CASE("evolve_doubled examples") {
  const PhysParams natural;
  const RealSpinor4 basis{{1.0, 0.0, 0.0, 0.0}};
  CHECK(evolve_doubled(basis, natural, 0.0) == basis);
  const RealSpinor4 quarter = evolve_doubled(basis, natural, kPi / 2.0);
  const RealSpinor4 expected{{0.0, 0.0, 0.0, -1.0}};
  for (int k = 0; k < 4; ++k) CHECK(std::abs(quarter.c[k] - expected.c[k]) <= 1e-15);
  CHECK(max_abs_diff(decode(quarter), majorana_rest_evolve({1.0, 0.0}, natural, kPi / 2.0)) <= 1e-15);
}

TEST_CASE("doubled evolution intertwines with the Majorana rest solution") {
  Random rng(43);
  const PhysParams params(1.3, 0.7, 1.1);
  for (int k = 0; k < 4; ++k) {
    RealSpinor4 e;
    e.c[k] = 1.0;
    CHECK(max_abs_diff(decode(evolve_doubled(e, params, 0.37)), majorana_rest_evolve(decode(e), params, 0.37)) <= 1e-15);
  }
  for (int n = 0; n < 1000; ++n) {
    const Spinor2 s = rng.spinor();
    const double t = rng.uniform(-10.0, 10.0);
    REQUIRE(max_abs_diff(decode(evolve_doubled(encode(s), params, t)), majorana_rest_evolve(s, params, t)) <= 1e-12);
  }
}

TEST_CASE("doubled propagator is orthogonal with unit determinant and composes") {
  Random rng(44);
  const PhysParams natural;
  for (int n = 0; n < 1000; ++n) {
    const double t1 = rng.uniform(-10.0, 10.0);
    const double t2 = rng.uniform(-10.0, 10.0);
    const RealMatrix4 u = doubled_propagator(natural, t1);
    REQUIRE(max_abs_diff(u.transpose() * u, RealMatrix4::identity()) <= 1e-14);
    REQUIRE(std::abs(determinant(u) - 1.0) <= 1e-14);
    REQUIRE(max_abs_diff(u * doubled_propagator(natural, t2), doubled_propagator(natural, t1 + t2)) <= 1e-13);
  }
}

TEST_CASE("lift_observable examples") {
  const Matrix4 id = lift_observable(Observable2(Matrix2::identity())).matrix();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const cplx d = (i == j) ? 1.0 : 0.0;
      CHECK(id(i, j) == d);
      CHECK(id(i, j + 2) == kI * d);
      CHECK(id(i + 2, j) == -kI * d);
      CHECK(id(i + 2, j + 2) == d);
    }
  CHECK(max_abs_diff(id, lift_by_multiplication(Matrix2::identity())) == 0.0);
  const RealSpinor4 r{{0.1, -0.7, 0.3, 0.2}};
  CHECK(expectation(Observable4(id), r) == doctest::Approx(norm(r) * norm(r)).epsilon(1e-15));

  const Matrix4 sz = lift_observable(Observable2::sigma_z()).matrix();
  CHECK(max_abs_diff(sz, lift_by_multiplication(gamma::sigma_z)) == 0.0);
  CHECK(sz(0, 2) == kI);
  CHECK(sz(1, 3) == -kI);
  CHECK(sz(2, 0) == -kI);
  CHECK(sz(3, 3) == -1.0);

  CHECK_THROWS_AS(Observable4(lift_by_multiplication(kI * Matrix2::identity())), std::invalid_argument);
}

TEST_CASE("lifted expectation equals the spinor-space expectation") {
  Random rng(45);
  for (int n = 0; n < 10000; ++n) {
    const Observable2 a(rng.hermitian());
    const RealSpinor4 r = rng.real_spinor4();
    REQUIRE(std::abs(expectation(lift_observable(a), r) - expectation(a, decode(r))) <= 1e-12);
  }
}

TEST_CASE("lift_observable is real-linear") {
  Random rng(46);
  for (int n = 0; n < 200; ++n) {
    const Matrix2 a = rng.hermitian();
    const Matrix2 b = rng.hermitian();
    const double alpha = rng.uniform(-3.0, 3.0);
    const double beta = rng.uniform(-3.0, 3.0);
    const Matrix4 combined = lift_observable(Observable2(cplx{alpha} * a + cplx{beta} * b)).matrix();
    const Matrix4 separate = alpha * lift_observable(Observable2(a)).matrix() +
                             beta * lift_observable(Observable2(b)).matrix();
    REQUIRE(max_abs_diff(combined, separate) <= 1e-14);
    REQUIRE(max_abs_diff(combined, combined.adjoint()) <= 1e-14);
  }
}

TEST_CASE("sample_populations on a basis state") {
  for (std::uint64_t shots : {1ull, 17ull, 1000ull}) {
    const ShotRecord rec = sample_populations(RealSpinor4{{1.0, 0.0, 0.0, 0.0}}, shots, 3);
    CHECK(rec.counts == std::array<std::uint64_t, 4>{shots, 0, 0, 0});
    CHECK(rec.shots == shots);
  }
  const ShotRecord last = sample_populations(RealSpinor4{{0.0, 0.0, 0.0, -1.0}}, 500, 9);
  CHECK(last.counts == std::array<std::uint64_t, 4>{0, 0, 0, 500});
}

TEST_CASE("sample_populations on the uniform state") {
  const RealSpinor4 uniform{{0.5, 0.5, 0.5, 0.5}};
  const std::uint64_t n = 100000;
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  const ShotRecord rec = sample_populations(uniform, n, 20240917);
  std::uint64_t total = 0;
  for (auto c : rec.counts) {
    CHECK(std::abs(static_cast<double>(c) - n / 4.0) <= 3.0 * sigma);
    total += c;
  }
  CHECK(total == n);
  const ShotRecord again = sample_populations(uniform, n, 20240917);
  CHECK(again.counts == rec.counts);
  CHECK(sample_populations(uniform, n, 20240918).counts != rec.counts);
}

TEST_CASE("sample_populations rejects bad input") {
  CHECK_THROWS_AS(sample_populations(RealSpinor4{{1.0, 1.0, 0.0, 0.0}}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_populations(RealSpinor4{{1.0, 0.0, 0.0, 0.0}}, 0, 1), std::invalid_argument);
  RealMatrix4 skew = RealMatrix4::identity();
  skew(0, 1) = 0.5;
  CHECK_THROWS_AS(sample_populations(RealSpinor4{{1.0, 0.0, 0.0, 0.0}}, 10, 1, skew), std::invalid_argument);
}

TEST_CASE("readout rotation hook") {
  // Swap 1r <-> 2i before readout.
  RealMatrix4 swap;
  swap(0, 3) = 1.0;
  swap(3, 0) = 1.0;
  swap(1, 1) = 1.0;
  swap(2, 2) = 1.0;
  const ShotRecord rec = sample_populations(RealSpinor4{{1.0, 0.0, 0.0, 0.0}}, 64, 5, swap);
  CHECK(rec.counts == std::array<std::uint64_t, 4>{0, 0, 0, 64});
}

TEST_CASE("population estimate of lifted sigma_z converges") {
  const PhysParams natural;
  const Observable4 sz = lift_observable(Observable2::sigma_z());
  const Spinor2 psi0{1.0 / std::sqrt(2.0), kI / std::sqrt(2.0)};
  const RealSpinor4 state = evolve_doubled(encode(psi0), natural, 0.3);
  const double exact = expectation(sz, state);
  const double diagonal = population_part(sz, state);
  // For real states the imaginary off-diagonal blocks of M^dag sigma_z M cancel.
  CHECK(diagonal == doctest::Approx(exact).epsilon(1e-14));

  const ShotRecord rec = sample_populations(state, 1000000, 77);
  const PopulationEstimate est = estimate_from_populations(sz, rec);
  CHECK(est.complete);
  CHECK(std::abs(est.value - diagonal) <= 3.0 * est.standard_error);

  // sigma_x lifts to a matrix with real off-diagonal entries: not population-estimable.
  const PopulationEstimate sx = estimate_from_populations(lift_observable(Observable2::sigma_x()), rec);
  CHECK_FALSE(sx.complete);
}
