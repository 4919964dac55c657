#include "majsim/wavepacket.hpp"

#include <bit>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "fft.hpp"
#include "majsim/momentum_dynamics.hpp"

namespace majsim {

namespace {

double amplitude_scale(const Wavepacket& packet) {
  return packet.dp() / std::sqrt(2.0 * std::numbers::pi * packet.params().hbar());
}

double parity(long k) { return (k % 2 == 0) ? 1.0 : -1.0; }

std::size_t fft_slot(long k, std::size_t n) {
  const long len = static_cast<long>(n);
  return static_cast<std::size_t>(((k % len) + len) % len);
}

void require_power_of_two(std::size_t n) {
  if (n < 2 || !std::has_single_bit(n)) {
    throw std::invalid_argument("grid size must be a power of two >= 2, got " + std::to_string(n));
  }
}

}  // namespace

Wavepacket::Wavepacket(std::size_t grid_size, double box_length, const PhysParams& params,
                       std::vector<Spinor2> modes)
    : box_length_(box_length), params_(params), modes_(std::move(modes)) {
  require_power_of_two(grid_size);
  if (modes_.size() != grid_size) {
    throw std::invalid_argument("mode count does not match grid size");
  }
  if (!std::isfinite(box_length) || box_length <= 0.0) {
    throw std::invalid_argument("box length must be finite and > 0");
  }
  for (const Spinor2& s : modes_) require_finite(s, "Wavepacket");
}

double Wavepacket::dp() const { return 2.0 * std::numbers::pi * params_.hbar() / box_length_; }

double Wavepacket::momentum(std::size_t i) const { return dp() * static_cast<double>(wavenumber(i)); }

double Wavepacket::position(std::size_t j) const {
  return -0.5 * box_length_ + dx() * static_cast<double>(j);
}

double Wavepacket::norm_squared() const {
  double s = 0.0;
  for (const Spinor2& m : modes_) s += std::norm(m.upper) + std::norm(m.lower);
  return s * dp();
}

Wavepacket build_gaussian(const GaussianSpec& spec, std::size_t grid_size, double box_length,
                          const PhysParams& params) {
  require_power_of_two(grid_size);
  if (!std::isfinite(box_length) || box_length <= 0.0) {
    throw std::invalid_argument("box length must be finite and > 0");
  }
  if (!std::isfinite(spec.sigma_x) || spec.sigma_x <= 0.0) {
    throw std::invalid_argument("sigma_x must be finite and > 0");
  }
  if (!std::isfinite(spec.x0) || !std::isfinite(spec.p0)) {
    throw std::invalid_argument("packet center must be finite");
  }
  if (!is_normalized(spec.direction)) {
    throw std::invalid_argument("spinor direction must be normalized");
  }
  const double n = static_cast<double>(grid_size);
  if (spec.sigma_x <= 4.0 * box_length / n) {
    throw std::invalid_argument("sigma_x must exceed 4 L / N (grid too coarse for the packet)");
  }

  const double hbar = params.hbar();
  const double dp = 2.0 * std::numbers::pi * hbar / box_length;
  const double p_lo = -0.5 * n * dp;
  const double p_hi = (0.5 * n - 1.0) * dp;
  // Momentum amplitude ~ exp(-(p - p0)^2 sigma^2 / hbar^2), position amplitude
  // ~ exp(-(x - x0)^2 / (4 sigma^2)).
  const double q = spec.sigma_x / hbar;
  const double edge_p = std::max(std::exp(-std::pow((p_lo - spec.p0) * q, 2)),
                                 std::exp(-std::pow((p_hi - spec.p0) * q, 2)));
  const double half = 0.5 * box_length;
  const double s4 = 4.0 * spec.sigma_x * spec.sigma_x;
  const double edge_x = std::max(std::exp(-std::pow(-half - spec.x0, 2) / s4),
                                 std::exp(-std::pow(half - spec.x0, 2) / s4));
  if (!(edge_p < kEdgeEnvelopeLimit)) {
    throw std::invalid_argument("packet envelope at the momentum grid edge is too large (aliasing)");
  }
  if (!(edge_x < kEdgeEnvelopeLimit)) {
    throw std::invalid_argument("packet envelope at the box edge is too large (wrap-around)");
  }

  std::vector<Spinor2> modes(grid_size);
  double total = 0.0;
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double p = dp * (static_cast<double>(i) - 0.5 * n);
    const double envelope = std::exp(-std::pow((p - spec.p0) * q, 2));
    const cplx amp = std::polar(envelope, -p * spec.x0 / hbar);
    modes[i] = amp * spec.direction;
    total += std::norm(modes[i].upper) + std::norm(modes[i].lower);
  }
  const double scale = 1.0 / std::sqrt(total * dp);
  for (Spinor2& m : modes) m = scale * m;
  return Wavepacket(grid_size, box_length, params, std::move(modes));
}

std::string to_string(PacketEquation eq) {
  switch (eq) {
    case PacketEquation::kMajorana:
      return "majorana";
    case PacketEquation::kDirac:
      return "dirac";
    case PacketEquation::kUltra:
      return "ultra";
  }
  return "unknown";
}

EvolvedPacket evolve_wavepacket(const Wavepacket& packet, PacketEquation equation, double t) {
  const std::size_t n = packet.grid_size();
  const std::size_t zero = n / 2;
  const PhysParams& params = packet.params();
  const auto in = packet.modes();
  std::vector<Spinor2> out(n);
  bool fallback = false;

  switch (equation) {
    case PacketEquation::kDirac:
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = dirac_mode_evolve(in[i], packet.momentum(i), params, t);
      }
      break;
    case PacketEquation::kUltra:
      for (std::size_t i = 0; i < n; ++i) {
        if (i == zero) {
          out[i] = majorana_mode_component(in[i], in[i], 0.0, params, t);
          fallback = true;
        } else {
          out[i] = ultrarelativistic_approx(in[i], packet.momentum(i), params, t);
        }
      }
      break;
    case PacketEquation::kMajorana:
      out[zero] = majorana_mode_component(in[zero], in[zero], 0.0, params, t);
      // Nyquist row, self-paired.
      out[0] = majorana_mode_component(in[0], in[0], packet.momentum(0), params, t);
      for (std::size_t i = zero + 1; i < n; ++i) {
        const std::size_t partner = n - i;
        const MomentumModePair evolved = majorana_mode_evolve(
            MomentumModePair(packet.momentum(i), in[i], in[partner]), params, t);
        out[i] = evolved.plus();
        out[partner] = evolved.minus();
      }
      break;
  }
  return {Wavepacket(n, packet.box_length(), params, std::move(out)), fallback};
}

std::vector<Spinor2> synthesize(const Wavepacket& packet) {
  const std::size_t n = packet.grid_size();
  std::vector<cplx> upper(n);
  std::vector<cplx> lower(n);
  const auto modes = packet.modes();
  for (std::size_t i = 0; i < n; ++i) {
    const long k = packet.wavenumber(i);
    const double s = parity(k);
    upper[fft_slot(k, n)] = s * modes[i].upper;
    lower[fft_slot(k, n)] = s * modes[i].lower;
  }
  detail::Dft(upper, +1).execute();
  detail::Dft(lower, +1).execute();
  const double scale = amplitude_scale(packet);
  std::vector<Spinor2> field(n);
  for (std::size_t j = 0; j < n; ++j) field[j] = {scale * upper[j], scale * lower[j]};
  return field;
}

Wavepacket analyze(std::span<const Spinor2> field, double box_length, const PhysParams& params) {
  const std::size_t n = field.size();
  require_power_of_two(n);
  std::vector<cplx> upper(n);
  std::vector<cplx> lower(n);
  for (std::size_t j = 0; j < n; ++j) {
    upper[j] = field[j].upper;
    lower[j] = field[j].lower;
  }
  detail::Dft(upper, -1).execute();
  detail::Dft(lower, -1).execute();
  // Construct a placeholder to reuse the grid helpers.
  Wavepacket grid(n, box_length, params, std::vector<Spinor2>(n));
  const double scale = 1.0 / (static_cast<double>(n) * amplitude_scale(grid));
  std::vector<Spinor2> modes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long k = grid.wavenumber(i);
    const double s = parity(k) * scale;
    modes[i] = {s * upper[fft_slot(k, n)], s * lower[fft_slot(k, n)]};
  }
  return Wavepacket(n, box_length, params, std::move(modes));
}

PositionProfile position_density(const Wavepacket& packet) {
  PositionProfile prof;
  prof.psi = synthesize(packet);
  const std::size_t n = packet.grid_size();
  const double dx = packet.dx();
  prof.x.resize(n);
  prof.density.resize(n);
  double total = 0.0;
  double first = 0.0;
  double sz = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Spinor2& s = prof.psi[j];
    prof.x[j] = packet.position(j);
    prof.density[j] = std::norm(s.upper) + std::norm(s.lower);
    total += prof.density[j] * dx;
    first += prof.x[j] * prof.density[j] * dx;
    sz += (std::norm(s.upper) - std::norm(s.lower)) * dx;
  }
  prof.norm = total;
  prof.mean_x = total > 0.0 ? first / total : 0.0;
  prof.sigma_z = total > 0.0 ? sz / total : 0.0;
  return prof;
}

double mean_momentum(const Wavepacket& packet) {
  double first = 0.0;
  const auto modes = packet.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    first += packet.momentum(i) * (std::norm(modes[i].upper) + std::norm(modes[i].lower));
  }
  return first * packet.dp() / packet.norm_squared();
}

double mean_sigma_z(const Wavepacket& packet) {
  double sz = 0.0;
  for (const Spinor2& m : packet.modes()) sz += std::norm(m.upper) - std::norm(m.lower);
  return sz * packet.dp() / packet.norm_squared();
}

double max_abs_diff(const Wavepacket& a, const Wavepacket& b) {
  if (a.grid_size() != b.grid_size() || a.box_length() != b.box_length()) {
    throw std::invalid_argument("packets live on different grids");
  }
  if (!(a.params() == b.params())) {
    throw std::invalid_argument("packets carry different physical parameters");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.grid_size(); ++i) {
    d = std::max(d, max_abs_diff(a.modes()[i], b.modes()[i]));
  }
  return d;
}

void write_snapshot_csv(std::ostream& os, const PositionProfile& profile) {
  os << "x,re_upper,im_upper,re_lower,im_lower,density\n";
  os << std::setprecision(17);
  for (std::size_t j = 0; j < profile.x.size(); ++j) {
    const Spinor2& s = profile.psi[j];
    os << profile.x[j] << ',' << s.upper.real() << ',' << s.upper.imag() << ','
       << s.lower.real() << ',' << s.lower.imag() << ',' << profile.density[j] << '\n';
  }
}

}  // namespace majsim
