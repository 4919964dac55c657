#include "majsim/ion_embedding.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace majsim {

double norm(const RealSpinor4& psi4) {
  double s = 0.0;
  for (double x : psi4.c) s += x * x;
  return std::sqrt(s);
}

bool is_normalized(const RealSpinor4& psi4, double tolerance) {
  double s = 0.0;
  for (double x : psi4.c) s += x * x;
  return std::abs(s - 1.0) <= tolerance;
}

RealMatrix4 RealMatrix4::identity() {
  RealMatrix4 r;
  for (int i = 0; i < 4; ++i) r(i, i) = 1.0;
  return r;
}

RealMatrix4 RealMatrix4::transpose() const {
  RealMatrix4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = (*this)(j, i);
  return r;
}

RealMatrix4 operator*(const RealMatrix4& a, const RealMatrix4& b) {
  RealMatrix4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

RealSpinor4 operator*(const RealMatrix4& a, const RealSpinor4& v) {
  RealSpinor4 r;
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += a(i, k) * v.c[k];
    r.c[i] = s;
  }
  return r;
}

double max_abs_diff(const RealMatrix4& a, const RealMatrix4& b) {
  double d = 0.0;
  for (int k = 0; k < 16; ++k) d = std::max(d, std::abs(a.m[k] - b.m[k]));
  return d;
}

double determinant(const RealMatrix4& a) {
  // Laplace expansion along the first row using 3x3 minors.
  auto minor3 = [&](int skip_col) {
    int cols[3];
    for (int j = 0, n = 0; j < 4; ++j)
      if (j != skip_col) cols[n++] = j;
    const auto e = [&](int r, int c) { return a(r + 1, cols[c]); };
    return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) -
           e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
           e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
  };
  double det = 0.0;
  for (int j = 0; j < 4; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    det += sign * a(0, j) * minor3(j);
  }
  return det;
}

Matrix4 Matrix4::adjoint() const {
  Matrix4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = std::conj((*this)(j, i));
  return r;
}

Matrix4 operator+(const Matrix4& a, const Matrix4& b) {
  Matrix4 r;
  for (int k = 0; k < 16; ++k) r.m[k] = a.m[k] + b.m[k];
  return r;
}

Matrix4 operator*(double s, const Matrix4& a) {
  Matrix4 r;
  for (int k = 0; k < 16; ++k) r.m[k] = s * a.m[k];
  return r;
}

double max_abs_diff(const Matrix4& a, const Matrix4& b) {
  double d = 0.0;
  for (int k = 0; k < 16; ++k) d = std::max(d, std::abs(a.m[k] - b.m[k]));
  return d;
}

Observable4::Observable4(const Matrix4& a, double tolerance) : a_(a) {
  if (max_abs_diff(a, a.adjoint()) > tolerance) {
    throw std::invalid_argument("doubled-space observable is not Hermitian");
  }
}

RealSpinor4 encode(const Spinor2& psi) {
  require_finite(psi, "encode");
  return {{psi.upper.real(), psi.lower.real(), psi.upper.imag(), psi.lower.imag()}};
}

Spinor2 decode(const RealSpinor4& psi4) {
  for (double x : psi4.c) {
    if (!std::isfinite(x)) throw std::invalid_argument("decode: non-finite component");
  }
  return {cplx{psi4.c[0], psi4.c[2]}, cplx{psi4.c[1], psi4.c[3]}};
}

RealMatrix4 doubled_propagator(const PhysParams& params, double t) {
  // sigma_x (x) i sigma_y with i sigma_y = [[0, 1], [-1, 0]]; squares to -I.
  static constexpr std::array<int, 16> kGenerator{
      0, 0, 0, 1,   //
      0, 0, -1, 0,  //
      0, 1, 0, 0,   //
      -1, 0, 0, 0};
  const double phase = params.omega() * t;
  const double cs = std::cos(phase);
  const double sn = std::sin(phase);
  RealMatrix4 u;
  for (int k = 0; k < 16; ++k) u.m[k] = sn * kGenerator[k];
  for (int i = 0; i < 4; ++i) u(i, i) += cs;
  return u;
}

RealSpinor4 evolve_doubled(const RealSpinor4& psi4, const PhysParams& params, double t) {
  for (double x : psi4.c) {
    if (!std::isfinite(x)) throw std::invalid_argument("evolve_doubled: non-finite component");
  }
  return doubled_propagator(params, t) * psi4;
}

Observable4 lift_observable(const Observable2& a) {
  constexpr cplx kI{0.0, 1.0};
  const Matrix2& m = a.matrix();
  Matrix4 out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out(i, j) = m(i, j);
      out(i, j + 2) = kI * m(i, j);
      out(i + 2, j) = -kI * m(i, j);
      out(i + 2, j + 2) = m(i, j);
    }
  }
  return Observable4(out);
}

double expectation(const Observable4& h, const RealSpinor4& psi4) {
  cplx s{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s += psi4.c[i] * h.matrix()(i, j) * psi4.c[j];
  return s.real();
}

ShotRecord sample_populations(const RealSpinor4& psi4, std::uint64_t shots, std::uint64_t seed,
                              const std::optional<RealMatrix4>& readout_rotation) {
  if (shots == 0) throw std::invalid_argument("sample_populations needs at least one shot");
  if (!is_normalized(psi4)) {
    throw std::invalid_argument("sample_populations requires a normalized state");
  }
  RealSpinor4 state = psi4;
  if (readout_rotation) {
    const RealMatrix4& r = *readout_rotation;
    if (max_abs_diff(r.transpose() * r, RealMatrix4::identity()) > kStrictTolerance) {
      throw std::invalid_argument("readout rotation is not orthogonal");
    }
    state = r * state;
  }

  std::array<double, 4> cumulative{};
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) {
    acc += state.c[k] * state.c[k];
    cumulative[k] = acc;
  }

  std::mt19937_64 engine(seed);
  ShotRecord record;
  record.shots = shots;
  record.seed = seed;
  for (std::uint64_t n = 0; n < shots; ++n) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    int k = 0;
    while (k < 3 && !(u < cumulative[k])) ++k;
    ++record.counts[k];
  }
  return record;
}

double population_part(const Observable4& h, const RealSpinor4& psi4) {
  double s = 0.0;
  for (int k = 0; k < 4; ++k) s += h.matrix()(k, k).real() * psi4.c[k] * psi4.c[k];
  return s;
}

PopulationEstimate estimate_from_populations(const Observable4& h, const ShotRecord& record) {
  if (record.shots == 0) throw std::invalid_argument("empty shot record");
  const double n = static_cast<double>(record.shots);
  double mean = 0.0;
  double second = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double f = static_cast<double>(record.counts[k]) / n;
    const double d = h.matrix()(k, k).real();
    mean += f * d;
    second += f * d * d;
  }
  bool complete = true;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && std::abs(h.matrix()(i, j).real()) > kStrictTolerance) complete = false;
  return {mean, std::sqrt(std::max(0.0, second - mean * mean) / n), complete};
}

}  // namespace majsim
