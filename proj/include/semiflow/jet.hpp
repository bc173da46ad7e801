#pragma once

#include <cmath>
#include <complex>

#include "semiflow/error.hpp"

namespace semiflow::expr {

using Complex = std::complex<double>;

// Value and first three z-derivatives of an analytic function at a point.
// Arithmetic below is truncated-Taylor (forward jet) propagation; it is exact
// for polynomial inputs up to order 3.
struct Jet3 {
  Complex c0{};  // value
  Complex c1{};  // first derivative
  Complex c2{};  // second derivative
  Complex c3{};  // third derivative

  static Jet3 variable(Complex z) { return {z, 1.0, 0.0, 0.0}; }
  static Jet3 constant(Complex c) { return {c, 0.0, 0.0, 0.0}; }
};

inline bool jet_finite(const Jet3& a) {
  auto ok = [](Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); };
  return ok(a.c0) && ok(a.c1) && ok(a.c2) && ok(a.c3);
}

inline Jet3 operator-(const Jet3& a) { return {-a.c0, -a.c1, -a.c2, -a.c3}; }

inline Jet3 operator+(const Jet3& a, const Jet3& b) {
  return {a.c0 + b.c0, a.c1 + b.c1, a.c2 + b.c2, a.c3 + b.c3};
}

inline Jet3 operator-(const Jet3& a, const Jet3& b) {
  return {a.c0 - b.c0, a.c1 - b.c1, a.c2 - b.c2, a.c3 - b.c3};
}

// Leibniz rule through order 3.
inline Jet3 operator*(const Jet3& a, const Jet3& b) {
  return {a.c0 * b.c0,
          a.c1 * b.c0 + a.c0 * b.c1,
          a.c2 * b.c0 + 2.0 * a.c1 * b.c1 + a.c0 * b.c2,
          a.c3 * b.c0 + 3.0 * a.c2 * b.c1 + 3.0 * a.c1 * b.c2 + a.c0 * b.c3};
}

inline Jet3 operator/(const Jet3& a, const Jet3& b) {
  if (b.c0 == Complex(0.0)) throw Error(ErrorCode::DivisionByZero, "jet divisor has zero value term");
  Jet3 q;
  q.c0 = a.c0 / b.c0;
  q.c1 = (a.c1 - q.c0 * b.c1) / b.c0;
  q.c2 = (a.c2 - 2.0 * q.c1 * b.c1 - q.c0 * b.c2) / b.c0;
  q.c3 = (a.c3 - 3.0 * q.c2 * b.c1 - 3.0 * q.c1 * b.c2 - q.c0 * b.c3) / b.c0;
  return q;
}

inline bool on_branch_cut(Complex w) { return w.imag() == 0.0 && w.real() <= 0.0; }

inline Jet3 jet_exp(const Jet3& a) {
  Complex e = std::exp(a.c0);
  return {e,
          a.c1 * e,
          (a.c2 + a.c1 * a.c1) * e,
          (a.c3 + 3.0 * a.c1 * a.c2 + a.c1 * a.c1 * a.c1) * e};
}

inline Jet3 jet_log(const Jet3& a) {
  if (on_branch_cut(a.c0)) throw Error(ErrorCode::BranchCut, "log argument on (-inf, 0]");
  Complex r = a.c1 / a.c0;
  return {std::log(a.c0),
          r,
          a.c2 / a.c0 - r * r,
          a.c3 / a.c0 - 3.0 * a.c1 * a.c2 / (a.c0 * a.c0) + 2.0 * r * r * r};
}

inline Jet3 jet_sqrt(const Jet3& a) {
  if (on_branch_cut(a.c0)) throw Error(ErrorCode::BranchCut, "sqrt argument on (-inf, 0]");
  Jet3 s;
  s.c0 = std::sqrt(a.c0);
  Complex d = 2.0 * s.c0;
  s.c1 = a.c1 / d;
  s.c2 = (a.c2 - 2.0 * s.c1 * s.c1) / d;
  s.c3 = (a.c3 - 6.0 * s.c1 * s.c2) / d;
  return s;
}

// Integer power by binary exponentiation; negative exponents go through the
// jet reciprocal, so a zero value term raises DivisionByZero.
inline Jet3 jet_pow(const Jet3& a, int n) {
  if (n < 0) return Jet3::constant(1.0) / jet_pow(a, -n);
  Jet3 result = Jet3::constant(1.0);
  Jet3 base = a;
  int e = n;
  while (e > 0) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

}  // namespace semiflow::expr
