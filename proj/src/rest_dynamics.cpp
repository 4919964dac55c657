#include "majsim/rest_dynamics.hpp"

#include <cmath>
#include <string>

namespace majsim {

Spinor2 majorana_rest_evolve(const Spinor2& psi0, const PhysParams& params, double t) {
  require_finite(psi0, "majorana_rest_evolve");
  const double phase = params.omega() * t;
  return std::cos(phase) * psi0 - std::sin(phase) * (gamma::sigma_y * conj(psi0));
}

Spinor2 dirac_rest_evolve(const Spinor2& psi0, const PhysParams& params, double t) {
  require_finite(psi0, "dirac_rest_evolve");
  const double phase = params.omega() * t;
  // sigma_z is diagonal, so the exponential is two phases.
  return {std::polar(1.0, -phase) * psi0.upper, std::polar(1.0, phase) * psi0.lower};
}

Spinor2 majorana_via_dirac(const Spinor2& psi0, const PhysParams& params, double t) {
  const Spinor2 forward = dirac_rest_evolve(psi0, params, t);
  const Spinor2 backward = dirac_rest_evolve(psi0, params, -t);
  return 0.5 * (forward + backward) - 0.5 * (gamma::sigma_x * (conj(forward) - conj(backward)));
}

Spinor2 rest_evolve(const Spinor2& psi0, RestEquation which, const PhysParams& params, double t) {
  return which == RestEquation::kDirac ? dirac_rest_evolve(psi0, params, t)
                                       : majorana_rest_evolve(psi0, params, t);
}

double sigma_z_closed_form(const Spinor2& psi0, RestEquation which, const PhysParams& params,
                           double t) {
  const double z0 = expectation(Observable2::sigma_z(), psi0);
  if (which == RestEquation::kDirac) return z0;
  const double cross = inner(psi0, gamma::sigma_x * conj(psi0)).imag();
  const double phase = 2.0 * params.omega() * t;
  return std::cos(phase) * z0 - std::sin(phase) * cross;
}

TimeSeries<double> sigma_z_series(const Spinor2& psi0, RestEquation which,
                                  const PhysParams& params, std::span<const double> times,
                                  double tolerance) {
  require_finite(psi0, "sigma_z_series");
  require_strictly_increasing(times);
  const Observable2 sz = Observable2::sigma_z();
  TimeSeries<double> out;
  out.times.assign(times.begin(), times.end());
  out.values.reserve(times.size());
  const double scale = std::max(1.0, std::norm(psi0.upper) + std::norm(psi0.lower));
  for (double t : times) {
    const double analytic = sigma_z_closed_form(psi0, which, params, t);
    const double direct = expectation(sz, rest_evolve(psi0, which, params, t));
    if (std::abs(analytic - direct) > tolerance * scale) {
      throw SelfCheckError("<sigma_z> closed form disagrees with evolved state at t = " +
                           std::to_string(t));
    }
    out.values.push_back(analytic);
  }
  return out;
}

}  // namespace majsim
