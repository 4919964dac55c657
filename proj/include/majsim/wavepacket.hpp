#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "majsim/params.hpp"
#include "majsim/spinor.hpp"

namespace majsim {

/// Momentum-space sampling of a spinor field on a periodic box.
///
/// Grid convention: p_k = 2 pi hbar k / L for k in [-N/2, N/2), stored at
/// index k + N/2. Positions are x_j = -L/2 + j L/N. The field is
///   psi(x_j) = sum_k dp / sqrt(2 pi hbar) psi_k e^{i p_k x_j / hbar},
/// which makes sum_j |psi(x_j)|^2 dx = sum_k |psi_k|^2 dp exactly.
///
/// The k = -N/2 (Nyquist) row has no +p partner. Majorana evolution treats it
/// as self-paired (psi_{-p} := psi_p). Packets built here keep that row below
/// 1e-8 of the peak, so the convention does not affect results.
class Wavepacket {
 public:
  Wavepacket(std::size_t grid_size, double box_length, const PhysParams& params,
             std::vector<Spinor2> modes);

  std::size_t grid_size() const { return modes_.size(); }
  double box_length() const { return box_length_; }
  const PhysParams& params() const { return params_; }
  std::span<const Spinor2> modes() const { return modes_; }

  double dp() const;
  double dx() const { return box_length_ / static_cast<double>(grid_size()); }

  /// Signed integer wavenumber of storage index i.
  long wavenumber(std::size_t i) const { return static_cast<long>(i) - static_cast<long>(grid_size() / 2); }
  double momentum(std::size_t i) const;
  double position(std::size_t j) const;

  /// sum_k |psi_k|^2 dp.
  double norm_squared() const;

 private:
  double box_length_;
  PhysParams params_;
  std::vector<Spinor2> modes_;
};

/// Gaussian packet: density centered at x0 with standard deviation sigma_x,
/// carrier momentum p0, constant spinor direction.
struct GaussianSpec {
  double x0 = 0.0;
  double p0 = 0.0;
  double sigma_x = 1.0;
  Spinor2 direction{cplx{1.0, 0.0}, cplx{0.0, 0.0}};
};

/// Relative envelope allowed at the edges of the momentum and position grids.
inline constexpr double kEdgeEnvelopeLimit = 1e-8;

/// Builds and normalizes a Gaussian packet. Rejects N that is not a power of
/// two, L <= 0, sigma_x <= 4 L / N, a non-normalized direction, and packets
/// whose envelope at either grid edge exceeds kEdgeEnvelopeLimit of the peak.
Wavepacket build_gaussian(const GaussianSpec& spec, std::size_t grid_size, double box_length,
                          const PhysParams& params);

enum class PacketEquation { kMajorana, kDirac, kUltra };

std::string to_string(PacketEquation eq);

struct EvolvedPacket {
  Wavepacket packet;
  /// Set when the massless propagator was requested but the p = 0 row had to
  /// be evolved with the exact Majorana propagator instead.
  bool zero_mode_fallback = false;
};

/// Mode-wise exact propagation. Majorana couples row k with row -k.
EvolvedPacket evolve_wavepacket(const Wavepacket& packet, PacketEquation equation, double t);

/// Position-space field on the x grid.
std::vector<Spinor2> synthesize(const Wavepacket& packet);

/// Inverse of synthesize for samples on the same x grid.
Wavepacket analyze(std::span<const Spinor2> field, double box_length, const PhysParams& params);

struct PositionProfile {
  std::vector<double> x;
  std::vector<Spinor2> psi;
  std::vector<double> density;
  double norm = 0.0;
  double mean_x = 0.0;
  double sigma_z = 0.0;
};

PositionProfile position_density(const Wavepacket& packet);

/// sum_k p_k |psi_k|^2 dp.
double mean_momentum(const Wavepacket& packet);

/// sum_k psi_k^dag sigma_z psi_k dp.
double mean_sigma_z(const Wavepacket& packet);

/// Largest componentwise mode difference. Rejects packets on different grids
/// or with different physical parameters.
double max_abs_diff(const Wavepacket& a, const Wavepacket& b);

/// CSV with header x,re_upper,im_upper,re_lower,im_lower,density.
void write_snapshot_csv(std::ostream& os, const PositionProfile& profile);

}  // namespace majsim
