#include "majsim/spinor.hpp"

#include <algorithm>
#include <string>

namespace majsim {

Matrix2 Matrix2::adjoint() const {
  Matrix2 r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      r(i, j) = std::conj((*this)(j, i));
    }
  }
  return r;
}

Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
  Matrix2 r;
  for (int k = 0; k < 4; ++k) r.m[k] = a.m[k] + b.m[k];
  return r;
}

Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
  Matrix2 r;
  for (int k = 0; k < 4; ++k) r.m[k] = a.m[k] - b.m[k];
  return r;
}

Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
  Matrix2 r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    }
  }
  return r;
}

Matrix2 operator*(cplx s, const Matrix2& a) {
  Matrix2 r;
  for (int k = 0; k < 4; ++k) r.m[k] = s * a.m[k];
  return r;
}

Spinor2 operator*(const Matrix2& a, const Spinor2& v) {
  return {a(0, 0) * v.upper + a(0, 1) * v.lower, a(1, 0) * v.upper + a(1, 1) * v.lower};
}

Matrix2 conj(const Matrix2& a) {
  Matrix2 r;
  for (int k = 0; k < 4; ++k) r.m[k] = std::conj(a.m[k]);
  return r;
}

double max_abs_diff(const Matrix2& a, const Matrix2& b) {
  double d = 0.0;
  for (int k = 0; k < 4; ++k) d = std::max(d, std::abs(a.m[k] - b.m[k]));
  return d;
}

bool is_hermitian(const Matrix2& a, double tolerance) {
  return max_abs_diff(a, a.adjoint()) <= tolerance;
}

Observable2::Observable2(const Matrix2& a, double tolerance) : a_(a) {
  for (const cplx& z : a.m) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument("observable has non-finite entries");
    }
  }
  if (!is_hermitian(a, tolerance)) {
    throw std::invalid_argument("observable is not Hermitian");
  }
}

bool is_finite(const Spinor2& psi) {
  return std::isfinite(psi.upper.real()) && std::isfinite(psi.upper.imag()) &&
         std::isfinite(psi.lower.real()) && std::isfinite(psi.lower.imag());
}

void require_finite(const Spinor2& psi, const char* what) {
  if (!is_finite(psi)) {
    throw std::invalid_argument(std::string(what) + ": spinor has non-finite components");
  }
}

cplx inner(const Spinor2& phi, const Spinor2& psi) {
  return std::conj(phi.upper) * psi.upper + std::conj(phi.lower) * psi.lower;
}

double norm(const Spinor2& psi) { return std::sqrt(std::norm(psi.upper) + std::norm(psi.lower)); }

bool is_normalized(const Spinor2& psi, double tolerance) {
  return std::abs(std::norm(psi.upper) + std::norm(psi.lower) - 1.0) <= tolerance;
}

double max_abs_diff(const Spinor2& a, const Spinor2& b) {
  return std::max(std::abs(a.upper - b.upper), std::abs(a.lower - b.lower));
}

Spinor2 charge_conjugate(const Spinor2& psi) {
  require_finite(psi, "charge_conjugate");
  return (gamma::gamma1 * gamma::gamma0) * conj(psi);
}

double expectation(const Observable2& a, const Spinor2& psi) {
  require_finite(psi, "expectation");
  const cplx value = inner(psi, a.matrix() * psi);
  double scale = 0.0;
  for (const cplx& z : a.matrix().m) scale = std::max(scale, std::abs(z));
  const double bound = kStrictTolerance * std::max(1.0, 2.0 * scale * (std::norm(psi.upper) + std::norm(psi.lower)));
  if (std::abs(value.imag()) > bound) {
    throw std::logic_error("expectation value has a non-negligible imaginary part");
  }
  return value.real();
}

}  // namespace majsim
