#include "majsim/params.hpp"

#include <cmath>
#include <numbers>

namespace majsim {

PhysParams::PhysParams(double mass, double hbar, double c) : mass_(mass), hbar_(hbar), c_(c) {
  if (!std::isfinite(mass) || mass < 0.0) {
    throw std::invalid_argument("mass must be finite and >= 0");
  }
  if (!std::isfinite(hbar) || hbar <= 0.0) {
    throw std::invalid_argument("hbar must be finite and > 0");
  }
  if (!std::isfinite(c) || c <= 0.0) {
    throw std::invalid_argument("c must be finite and > 0");
  }
  if (!std::isfinite(omega())) {
    throw std::invalid_argument("m c^2 / hbar overflows");
  }
}

double PhysParams::period() const {
  if (omega() == 0.0) {
    throw std::invalid_argument("period is undefined for zero mass");
  }
  return 2.0 * std::numbers::pi / omega();
}

void require_strictly_increasing(std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) {
      throw std::invalid_argument("time sample " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw std::invalid_argument("times are not strictly increasing at index " + std::to_string(i));
    }
  }
}

std::vector<double> linspace(double start, double stop, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = start;
    return out;
  }
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = start + step * static_cast<double>(i);
  }
  if (count > 1) out.back() = stop;
  return out;
}

}  // namespace majsim
