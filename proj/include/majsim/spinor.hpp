#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace majsim {

using cplx = std::complex<double>;

/// Run-wide comparison tolerance used by self-checks unless overridden.
inline constexpr double kDefaultTolerance = 1e-10;

/// Tolerance for "normalized" and "Hermitian" flags on tiny matrices/spinors.
inline constexpr double kStrictTolerance = 1e-12;

/// Two-component complex spinor. Plain value type.
struct Spinor2 {
  cplx upper{};
  cplx lower{};

  friend bool operator==(const Spinor2&, const Spinor2&) = default;
};

inline Spinor2 operator+(const Spinor2& a, const Spinor2& b) {
  return {a.upper + b.upper, a.lower + b.lower};
}
inline Spinor2 operator-(const Spinor2& a, const Spinor2& b) {
  return {a.upper - b.upper, a.lower - b.lower};
}
inline Spinor2 operator-(const Spinor2& a) { return {-a.upper, -a.lower}; }
inline Spinor2 operator*(cplx s, const Spinor2& a) { return {s * a.upper, s * a.lower}; }
inline Spinor2 operator*(double s, const Spinor2& a) { return {s * a.upper, s * a.lower}; }

/// Componentwise complex conjugate.
inline Spinor2 conj(const Spinor2& a) { return {std::conj(a.upper), std::conj(a.lower)}; }

/// Dense row-major 2x2 complex matrix.
struct Matrix2 {
  std::array<cplx, 4> m{};

  constexpr cplx operator()(int row, int col) const { return m[row * 2 + col]; }
  constexpr cplx& operator()(int row, int col) { return m[row * 2 + col]; }

  static constexpr Matrix2 identity() { return {{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{1, 0}}}; }

  Matrix2 adjoint() const;
  friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

Matrix2 operator+(const Matrix2& a, const Matrix2& b);
Matrix2 operator-(const Matrix2& a, const Matrix2& b);
Matrix2 operator*(const Matrix2& a, const Matrix2& b);
Matrix2 operator*(cplx s, const Matrix2& a);
Spinor2 operator*(const Matrix2& a, const Spinor2& v);

/// Componentwise complex conjugate (not the adjoint).
Matrix2 conj(const Matrix2& a);

/// Largest |a_ij - b_ij|.
double max_abs_diff(const Matrix2& a, const Matrix2& b);

/// Gamma matrices of the 1+1 dimensional representation and the Pauli set.
namespace gamma {
inline constexpr Matrix2 gamma0{{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{-1, 0}}};
inline constexpr Matrix2 gamma1{{cplx{0, 0}, cplx{1, 0}, cplx{-1, 0}, cplx{0, 0}}};
inline constexpr Matrix2 sigma_x{{cplx{0, 0}, cplx{1, 0}, cplx{1, 0}, cplx{0, 0}}};
inline constexpr Matrix2 sigma_y{{cplx{0, 0}, cplx{0, -1}, cplx{0, 1}, cplx{0, 0}}};
inline constexpr Matrix2 sigma_z{{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{-1, 0}}};
}  // namespace gamma

/// Hermitian 2x2 observable. Construction rejects non-Hermitian input.
class Observable2 {
 public:
  explicit Observable2(const Matrix2& a, double tolerance = kStrictTolerance);

  const Matrix2& matrix() const { return a_; }

  static Observable2 sigma_x() { return Observable2(gamma::sigma_x); }
  static Observable2 sigma_y() { return Observable2(gamma::sigma_y); }
  static Observable2 sigma_z() { return Observable2(gamma::sigma_z); }

 private:
  Matrix2 a_;
};

bool is_hermitian(const Matrix2& a, double tolerance = kStrictTolerance);

bool is_finite(const Spinor2& psi);

/// Throws std::invalid_argument naming `what` when psi has a NaN/Inf component.
void require_finite(const Spinor2& psi, const char* what);

/// <phi|psi>, conjugate-linear in phi.
cplx inner(const Spinor2& phi, const Spinor2& psi);

double norm(const Spinor2& psi);

bool is_normalized(const Spinor2& psi, double tolerance = kStrictTolerance);

/// Largest componentwise |a - b|. No global phase is factored out.
double max_abs_diff(const Spinor2& a, const Spinor2& b);

/// psi_c = gamma1 gamma0 psi^* (= -sigma_x psi^*).
Spinor2 charge_conjugate(const Spinor2& psi);

/// psi^dagger A psi. The imaginary residue is checked against kStrictTolerance
/// (scaled by |A| |psi|^2) and then dropped.
double expectation(const Observable2& a, const Spinor2& psi);

}  // namespace majsim
