#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace majsim {

/// Raised when a numeric self-check (closed form vs. cross-check path) fails.
class SelfCheckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mass, hbar and c for a run. Defaults to natural units (all 1, so omega = 1).
class PhysParams {
 public:
  PhysParams() = default;
  PhysParams(double mass, double hbar, double c);

  double mass() const { return mass_; }
  double hbar() const { return hbar_; }
  double c() const { return c_; }

  /// Rest frequency m c^2 / hbar.
  double omega() const { return mass_ * c_ * c_ / hbar_; }

  /// One rest-frequency period 2 pi / omega. Throws for m = 0.
  double period() const;

  friend bool operator==(const PhysParams&, const PhysParams&) = default;

 private:
  double mass_ = 1.0;
  double hbar_ = 1.0;
  double c_ = 1.0;
};

/// Ordered samples of a scalar or spinor quantity.
template <class T>
struct TimeSeries {
  std::vector<double> times;
  std::vector<T> values;
};

/// Throws std::invalid_argument unless every time is finite and the list is
/// strictly increasing.
void require_strictly_increasing(std::span<const double> times);

/// `count` evenly spaced samples over [start, stop], both ends included.
std::vector<double> linspace(double start, double stop, std::size_t count);

}  // namespace majsim
