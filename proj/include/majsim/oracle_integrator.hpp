#pragma once

#include <cstddef>

#include "majsim/momentum_dynamics.hpp"
#include "majsim/params.hpp"
#include "majsim/spinor.hpp"

// Brute-force fixed-step RK4 integration of the first-order equations of
// motion. This is a test oracle for the closed-form evolvers and must never
// call them; it only evaluates right-hand sides. Equations that contain psi^*
// are not holomorphic, so they are integrated on (Re psi, Im psi).

namespace majsim::oracle {

/// Largest allowed |omega| * dt.
inline constexpr double kMaxPhasePerStep = 0.1;

struct IntegratorConfig {
  double dt = 1e-3;
  std::size_t max_steps = 100'000'000;

  /// Throws std::invalid_argument unless dt > 0 and dt * omega_max <= kMaxPhasePerStep.
  void validate(double omega_max) const;
};

/// d/dt psi = -(m c^2 / hbar) sigma_y psi^*, as a real 4-dimensional system.
Spinor2 integrate_rest(const Spinor2& psi0, const PhysParams& params, double t,
                       const IntegratorConfig& cfg);

/// i hbar d/dt psi_p = c p sigma_x psi_p - i m c^2 sigma_y psi_-p^* together with
/// the same equation at -p, as a real 8-dimensional system.
MomentumModePair integrate_mode_pair(const MomentumModePair& pair, const PhysParams& params,
                                     double t, const IntegratorConfig& cfg);

/// i hbar d/dt psi = (c p sigma_x + m c^2 sigma_z) psi, holomorphic in psi.
Spinor2 integrate_dirac_mode(const Spinor2& psi_p, double p, const PhysParams& params, double t,
                             const IntegratorConfig& cfg);

}  // namespace majsim::oracle
