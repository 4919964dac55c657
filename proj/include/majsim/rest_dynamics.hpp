#pragma once

#include <span>

#include "majsim/params.hpp"
#include "majsim/spinor.hpp"

namespace majsim {

enum class RestEquation { kDirac, kMajorana };

/// Zero-momentum Majorana evolution:
///   psi(t) = cos(wt) psi(0) - sin(wt) sigma_y psi(0)^*,  w = m c^2 / hbar.
/// Not phase covariant: psi and e^{i theta} psi evolve differently, so
/// results must be compared componentwise.
Spinor2 majorana_rest_evolve(const Spinor2& psi0, const PhysParams& params, double t);

/// Zero-momentum Dirac evolution exp(-i w t sigma_z) psi(0).
Spinor2 dirac_rest_evolve(const Spinor2& psi0, const PhysParams& params, double t);

/// Majorana rest solution rebuilt from forward and backward Dirac solutions:
///   1/2 [psi_D(t) + psi_D(-t)] - 1/2 sigma_x [psi_D(t)^* - psi_D(-t)^*].
/// Independent route to majorana_rest_evolve, used as a cross-check.
Spinor2 majorana_via_dirac(const Spinor2& psi0, const PhysParams& params, double t);

/// Analytic <sigma_z>(t).
///   Dirac:    psi0^dag sigma_z psi0 (constant).
///   Majorana: cos(2wt) psi0^dag sigma_z psi0 - sin(2wt) Im[psi0^dag sigma_x psi0^*].
double sigma_z_closed_form(const Spinor2& psi0, RestEquation which, const PhysParams& params,
                           double t);

/// <sigma_z> sampled at `times` from the analytic formula. Each sample is also
/// recomputed as expectation(sigma_z, evolve(psi0, t)); a disagreement larger
/// than `tolerance` raises SelfCheckError. Unordered times are rejected.
TimeSeries<double> sigma_z_series(const Spinor2& psi0, RestEquation which,
                                  const PhysParams& params, std::span<const double> times,
                                  double tolerance = kDefaultTolerance);

Spinor2 rest_evolve(const Spinor2& psi0, RestEquation which, const PhysParams& params, double t);

}  // namespace majsim
