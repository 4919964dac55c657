#pragma once

#include <functional>
#include <limits>

#include "majsim/params.hpp"
#include "majsim/spinor.hpp"

namespace majsim {

/// Amplitudes at +p and -p, which the Majorana mass term couples.
/// Keyed by |p|; the p = 0 pair is self-conjugate and both slots must hold
/// the same value.
class MomentumModePair {
 public:
  MomentumModePair(double p, const Spinor2& plus, const Spinor2& minus);

  /// The self-conjugate p = 0 pair.
  static MomentumModePair rest(const Spinor2& psi) { return {0.0, psi, psi}; }

  double p() const { return p_; }
  const Spinor2& plus() const { return plus_; }
  const Spinor2& minus() const { return minus_; }

  /// |psi_p|^2 + |psi_-p|^2 (the p = 0 pair counts once).
  double norm_squared() const;

 private:
  double p_;
  Spinor2 plus_;
  Spinor2 minus_;
};

/// sqrt(p^2 c^2 + m^2 c^4) / hbar, evaluated with hypot.
struct ModeFrequency {
  double omega_p;
};

ModeFrequency omega_p(double p, const PhysParams& params);

/// Exact Majorana evolution of a (p, -p) pair:
///   psi_p(t) = cos(w_p t) psi_p(0)
///              - sin(w_p t)/(hbar w_p) [i c p sigma_x psi_p(0) + m c^2 sigma_y psi_-p(0)^*]
/// and the same with p -> -p for the partner.
MomentumModePair majorana_mode_evolve(const MomentumModePair& pair, const PhysParams& params,
                                      double t);

/// One slot of the pair update: `self` at signed momentum p, `partner` at -p.
Spinor2 majorana_mode_component(const Spinor2& self, const Spinor2& partner, double p,
                                const PhysParams& params, double t);

/// exp(-i (c p sigma_x + m c^2 sigma_z) t / hbar), unitary for all real p, t.
Matrix2 dirac_mode_propagator(double p, const PhysParams& params, double t);

Spinor2 dirac_mode_evolve(const Spinor2& psi_p, double p, const PhysParams& params, double t);

/// Massless propagator exp(-i c p t sigma_x / hbar), applied whatever the mass.
/// Rejects p = 0. Check validity_window before trusting it for m > 0.
Spinor2 ultrarelativistic_approx(const Spinor2& psi_p, double p, const PhysParams& params,
                                 double t);

/// Fraction of validity_window inside which the massless propagator is
/// treated as accurate ("t << window").
inline constexpr double kUltraValidityFraction = 0.1;

/// Breakdown time 2 hbar |p| / (m^2 c^3). Infinite when m = 0.
double validity_window(double p, const PhysParams& params);

inline bool is_unbounded(double window) { return window == std::numeric_limits<double>::infinity(); }

/// Mode trajectory t -> psi_p(t) for one slot.
using ModeTrajectory = std::function<Spinor2(double)>;

/// || hbar^2 psi'' + (p^2 c^2 + m^2 c^4) psi || with psi'' from a centered
/// second difference of step dt. For an exact solution this is the O(dt^2)
/// truncation error, not zero. Rejects dt <= 0.
double klein_gordon_residual(const ModeTrajectory& trajectory, double p, const PhysParams& params,
                             double t, double dt);

/// Residuals at dt and dt/2 and their ratio. An exact Klein-Gordon solution
/// shows the second-order ratio 4; anything else (e.g. a frozen state with
/// m > 0, ratio 1) is flagged inconsistent.
struct KleinGordonCheck {
  double residual;
  double residual_half;
  double ratio;
  bool consistent;
};

/// Allowed deviation of the Richardson ratio from 4.
inline constexpr double kRichardsonRatioTolerance = 0.5;

KleinGordonCheck klein_gordon_check(const ModeTrajectory& trajectory, double p,
                                    const PhysParams& params, double t, double dt);

}  // namespace majsim
