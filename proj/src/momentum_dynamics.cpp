#include "majsim/momentum_dynamics.hpp"

#include <cmath>

namespace majsim {

namespace {

constexpr cplx kI{0.0, 1.0};

// sin(w t) / w, continuous through w = 0.
double sinc_factor(double w, double t) {
  if (w == 0.0) return t;
  return std::sin(w * t) / w;
}

}  // namespace

MomentumModePair::MomentumModePair(double p, const Spinor2& plus, const Spinor2& minus)
    : p_(p), plus_(plus), minus_(minus) {
  if (!std::isfinite(p) || p < 0.0) {
    throw std::invalid_argument("mode pair momentum must be finite and >= 0");
  }
  require_finite(plus, "MomentumModePair(+p)");
  require_finite(minus, "MomentumModePair(-p)");
  if (p == 0.0 && !(plus == minus)) {
    throw std::invalid_argument("p = 0 mode pair must hold a single self-conjugate amplitude");
  }
}

double MomentumModePair::norm_squared() const {
  const double a = std::norm(plus_.upper) + std::norm(plus_.lower);
  if (p_ == 0.0) return a;
  return a + std::norm(minus_.upper) + std::norm(minus_.lower);
}

ModeFrequency omega_p(double p, const PhysParams& params) {
  const double c = params.c();
  return {std::hypot(p * c, params.mass() * c * c) / params.hbar()};
}

Spinor2 majorana_mode_component(const Spinor2& self, const Spinor2& partner, double p,
                                const PhysParams& params, double t) {
  const double w = omega_p(p, params).omega_p;
  const double c = params.c();
  const double s = sinc_factor(w, t) / params.hbar();
  const Spinor2 kick = (kI * (c * p)) * (gamma::sigma_x * self) +
                       (params.mass() * c * c) * (gamma::sigma_y * conj(partner));
  return std::cos(w * t) * self - s * kick;
}

MomentumModePair majorana_mode_evolve(const MomentumModePair& pair, const PhysParams& params,
                                      double t) {
  const Spinor2 plus = majorana_mode_component(pair.plus(), pair.minus(), pair.p(), params, t);
  if (pair.p() == 0.0) return MomentumModePair::rest(plus);
  const Spinor2 minus = majorana_mode_component(pair.minus(), pair.plus(), -pair.p(), params, t);
  return {pair.p(), plus, minus};
}

Matrix2 dirac_mode_propagator(double p, const PhysParams& params, double t) {
  const double w = omega_p(p, params).omega_p;
  const double c = params.c();
  const double s = sinc_factor(w, t) / params.hbar();
  const Matrix2 generator = cplx{c * p} * gamma::sigma_x + cplx{params.mass() * c * c} * gamma::sigma_z;
  return cplx{std::cos(w * t)} * Matrix2::identity() - (kI * s) * generator;
}

Spinor2 dirac_mode_evolve(const Spinor2& psi_p, double p, const PhysParams& params, double t) {
  require_finite(psi_p, "dirac_mode_evolve");
  return dirac_mode_propagator(p, params, t) * psi_p;
}

Spinor2 ultrarelativistic_approx(const Spinor2& psi_p, double p, const PhysParams& params,
                                 double t) {
  if (p == 0.0) {
    throw std::invalid_argument("ultrarelativistic approximation is undefined at p = 0");
  }
  require_finite(psi_p, "ultrarelativistic_approx");
  const double phase = params.c() * p * t / params.hbar();
  return std::cos(phase) * psi_p - (kI * std::sin(phase)) * (gamma::sigma_x * psi_p);
}

double validity_window(double p, const PhysParams& params) {
  const double m = params.mass();
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  const double c = params.c();
  return 2.0 * params.hbar() * std::abs(p) / (m * m * c * c * c);
}

double klein_gordon_residual(const ModeTrajectory& trajectory, double p, const PhysParams& params,
                             double t, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("klein_gordon_residual requires dt > 0");
  }
  const Spinor2 before = trajectory(t - dt);
  const Spinor2 here = trajectory(t);
  const Spinor2 after = trajectory(t + dt);
  const Spinor2 second = (1.0 / (dt * dt)) * (after - 2.0 * here + before);
  const double hbar = params.hbar();
  const double energy_sq = std::pow(params.hbar() * omega_p(p, params).omega_p, 2);
  return norm((hbar * hbar) * second + energy_sq * here);
}

KleinGordonCheck klein_gordon_check(const ModeTrajectory& trajectory, double p,
                                    const PhysParams& params, double t, double dt) {
  KleinGordonCheck check{};
  check.residual = klein_gordon_residual(trajectory, p, params, t, dt);
  check.residual_half = klein_gordon_residual(trajectory, p, params, t, 0.5 * dt);
  check.ratio = check.residual / check.residual_half;
  check.consistent = std::isfinite(check.ratio) &&
                     std::abs(check.ratio - 4.0) <= kRichardsonRatioTolerance;
  return check;
}

}  // namespace majsim
