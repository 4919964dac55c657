#include "majsim/oracle_integrator.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace majsim::oracle {

namespace {

constexpr cplx kI{0.0, 1.0};

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, const State<N>& k) {
  State<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * k[i];
  return out;
}

// Classical RK4 with n = ceil(|t| / dt) equal steps landing exactly on t.
template <std::size_t N, class Rhs>
State<N> rk4(State<N> y, double t, const IntegratorConfig& cfg, Rhs&& rhs) {
  if (t == 0.0) return y;
  const double steps_real = std::ceil(std::abs(t) / cfg.dt);
  if (!(steps_real <= static_cast<double>(cfg.max_steps))) {
    throw std::overflow_error("RK4 step count " + std::to_string(steps_real) +
                              " exceeds max_steps");
  }
  const auto steps = static_cast<std::size_t>(steps_real);
  const double h = t / static_cast<double>(steps);
  for (std::size_t n = 0; n < steps; ++n) {
    const State<N> k1 = rhs(y);
    const State<N> k2 = rhs(axpy(y, 0.5 * h, k1));
    const State<N> k3 = rhs(axpy(y, 0.5 * h, k2));
    const State<N> k4 = rhs(axpy(y, h, k3));
    for (std::size_t i = 0; i < N; ++i) {
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  return y;
}

// Real coordinates of one spinor occupy 4 slots: (Re u, Im u, Re l, Im l).
template <std::size_t N>
void pack(State<N>& y, std::size_t offset, const Spinor2& s) {
  y[offset + 0] = s.upper.real();
  y[offset + 1] = s.upper.imag();
  y[offset + 2] = s.lower.real();
  y[offset + 3] = s.lower.imag();
}

template <std::size_t N>
Spinor2 unpack(const State<N>& y, std::size_t offset) {
  return {cplx{y[offset + 0], y[offset + 1]}, cplx{y[offset + 2], y[offset + 3]}};
}

double mode_frequency(double p, const PhysParams& params) {
  const double c = params.c();
  return std::hypot(p * c, params.mass() * c * c) / params.hbar();
}

}  // namespace

void IntegratorConfig::validate(double omega_max) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("integrator dt must be finite and > 0");
  }
  if (max_steps == 0) {
    throw std::invalid_argument("integrator max_steps must be positive");
  }
  if (dt * std::abs(omega_max) > kMaxPhasePerStep) {
    throw std::invalid_argument("integrator dt * omega = " + std::to_string(dt * omega_max) +
                                " exceeds " + std::to_string(kMaxPhasePerStep));
  }
}

Spinor2 integrate_rest(const Spinor2& psi0, const PhysParams& params, double t,
                       const IntegratorConfig& cfg) {
  require_finite(psi0, "integrate_rest");
  cfg.validate(params.omega());
  const double rate = params.mass() * params.c() * params.c() / params.hbar();
  State<4> y;
  pack(y, 0, psi0);
  y = rk4(y, t, cfg, [&](const State<4>& s) {
    const Spinor2 psi = unpack(s, 0);
    const Spinor2 d = -rate * (gamma::sigma_y * conj(psi));
    State<4> out;
    pack(out, 0, d);
    return out;
  });
  return unpack(y, 0);
}

MomentumModePair integrate_mode_pair(const MomentumModePair& pair, const PhysParams& params,
                                     double t, const IntegratorConfig& cfg) {
  cfg.validate(mode_frequency(pair.p(), params));
  const double hbar = params.hbar();
  const double cp = params.c() * pair.p();
  const double mc2 = params.mass() * params.c() * params.c();
  // d/dt psi_q = (-i/hbar) [c q sigma_x psi_q - i m c^2 sigma_y psi_{-q}^*]
  auto derivative = [&](const Spinor2& self, const Spinor2& partner, double cq) {
    const Spinor2 h = cq * (gamma::sigma_x * self) - (kI * mc2) * (gamma::sigma_y * conj(partner));
    return (-kI / hbar) * h;
  };
  State<8> y;
  pack(y, 0, pair.plus());
  pack(y, 4, pair.minus());
  y = rk4(y, t, cfg, [&](const State<8>& s) {
    const Spinor2 plus = unpack(s, 0);
    const Spinor2 minus = unpack(s, 4);
    State<8> out;
    pack(out, 0, derivative(plus, minus, cp));
    pack(out, 4, derivative(minus, plus, -cp));
    return out;
  });
  const Spinor2 plus = unpack(y, 0);
  if (pair.p() == 0.0) return MomentumModePair::rest(plus);
  return {pair.p(), plus, unpack(y, 4)};
}

Spinor2 integrate_dirac_mode(const Spinor2& psi_p, double p, const PhysParams& params, double t,
                             const IntegratorConfig& cfg) {
  require_finite(psi_p, "integrate_dirac_mode");
  cfg.validate(mode_frequency(p, params));
  const double hbar = params.hbar();
  const double cp = params.c() * p;
  const double mc2 = params.mass() * params.c() * params.c();
  // Holomorphic, but the same real-coordinate driver serves: multiplication by
  // a complex matrix is real-linear.
  State<4> y;
  pack(y, 0, psi_p);
  y = rk4(y, t, cfg, [&](const State<4>& s) {
    const Spinor2 psi = unpack(s, 0);
    const Spinor2 h = cp * (gamma::sigma_x * psi) + mc2 * (gamma::sigma_z * psi);
    State<4> out;
    pack(out, 0, (-kI / hbar) * h);
    return out;
  });
  return unpack(y, 0);
}

}  // namespace majsim::oracle
