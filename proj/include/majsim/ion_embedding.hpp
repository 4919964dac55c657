#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "majsim/params.hpp"
#include "majsim/spinor.hpp"

namespace majsim {

/// Real four-component spinor (psi1_r, psi2_r, psi1_i, psi2_i).
struct RealSpinor4 {
  std::array<double, 4> c{};

  friend bool operator==(const RealSpinor4&, const RealSpinor4&) = default;
};

/// Population basis labels, in RealSpinor4 component order.
inline constexpr std::array<std::string_view, 4> kPopulationBasis{"1r", "2r", "1i", "2i"};

double norm(const RealSpinor4& psi4);
bool is_normalized(const RealSpinor4& psi4, double tolerance = kStrictTolerance);

/// Dense row-major 4x4 real matrix.
struct RealMatrix4 {
  std::array<double, 16> m{};

  double operator()(int row, int col) const { return m[row * 4 + col]; }
  double& operator()(int row, int col) { return m[row * 4 + col]; }

  static RealMatrix4 identity();
  RealMatrix4 transpose() const;
};

RealMatrix4 operator*(const RealMatrix4& a, const RealMatrix4& b);
RealSpinor4 operator*(const RealMatrix4& a, const RealSpinor4& v);
double max_abs_diff(const RealMatrix4& a, const RealMatrix4& b);
double determinant(const RealMatrix4& a);

/// Dense row-major 4x4 complex matrix.
struct Matrix4 {
  std::array<cplx, 16> m{};

  cplx operator()(int row, int col) const { return m[row * 4 + col]; }
  cplx& operator()(int row, int col) { return m[row * 4 + col]; }

  Matrix4 adjoint() const;
};

Matrix4 operator+(const Matrix4& a, const Matrix4& b);
Matrix4 operator*(double s, const Matrix4& a);
double max_abs_diff(const Matrix4& a, const Matrix4& b);

/// Hermitian 4x4 observable on the doubled space.
class Observable4 {
 public:
  explicit Observable4(const Matrix4& a, double tolerance = kStrictTolerance);
  const Matrix4& matrix() const { return a_; }

 private:
  Matrix4 a_;
};

/// (Re psi1, Re psi2, Im psi1, Im psi2).
RealSpinor4 encode(const Spinor2& psi);

/// Applies M = (I  iI): psi = (psi1_r + i psi1_i, psi2_r + i psi2_i).
Spinor2 decode(const RealSpinor4& psi4);

/// U(t) = cos(wt) I + sin(wt) sigma_x (x) (i sigma_y), the propagator of
/// i hbar d/dt psi4 = -m c^2 (sigma_x (x) sigma_y) psi4. Built from the
/// integer matrix sigma_x (x) i sigma_y, so every entry is real by construction.
RealMatrix4 doubled_propagator(const PhysParams& params, double t);

RealSpinor4 evolve_doubled(const RealSpinor4& psi4, const PhysParams& params, double t);

/// M^dag A M = [[A, iA], [-iA, A]].
Observable4 lift_observable(const Observable2& a);

/// psi4^T H psi4 for real psi4. Only the real symmetric part of H contributes.
double expectation(const Observable4& h, const RealSpinor4& psi4);

/// Fluorescence-style readout of the four populations.
struct ShotRecord {
  std::uint64_t shots = 0;
  std::array<std::uint64_t, 4> counts{};
  std::uint64_t seed = 0;
};

/// Draws `shots` categorical samples from (psi4_k^2) with std::mt19937_64 seeded
/// by `seed`. Uniform variates are (engine() >> 11) * 2^-53, so records are
/// bit-reproducible on every conforming platform. `readout_rotation`, when
/// given, must be real orthogonal and is applied before readout. Rejects
/// unnormalized states and shots == 0.
ShotRecord sample_populations(const RealSpinor4& psi4, std::uint64_t shots, std::uint64_t seed,
                              const std::optional<RealMatrix4>& readout_rotation = std::nullopt);

/// Diagonal contribution sum_k Re H_kk psi4_k^2: the part of <H> that the
/// populations determine.
double population_part(const Observable4& h, const RealSpinor4& psi4);

/// Estimate of the population part of <H> from a shot record.
/// `complete` is true only when the real symmetric off-diagonal part of H
/// vanishes, i.e. when populations determine the whole expectation value.
/// Otherwise `value` covers the diagonal part only.
struct PopulationEstimate {
  double value;
  double standard_error;
  bool complete;
};

PopulationEstimate estimate_from_populations(const Observable4& h, const ShotRecord& record);

}  // namespace majsim
