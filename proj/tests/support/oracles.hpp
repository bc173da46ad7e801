#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "semiflow/expr.hpp"

namespace oracles {

using Complex = std::complex<double>;

// ---- Closed-form flows for the bundled generators ----

// f(z) = -(1-z)^2:   1/(1-u) = 1/(1-z) + t
inline Complex parabolic_flow(Complex z, double t) {
  Complex s = 1.0 - z;
  return 1.0 - s / (1.0 + t * s);
}

// f(z) = (z^2-1)/2:  artanh u = artanh z + t/2
inline Complex tanh_flow(Complex z, double t) {
  return std::tanh(std::atanh(z) + t / 2.0);
}

// f(z) = -(i/2)(1-z)^2:  1/(1-u) = 1/(1-z) + i t/2
inline Complex translation_i_flow(Complex z, double t) {
  Complex v = 1.0 / (1.0 - z) + Complex(0.0, t / 2.0);
  return 1.0 - 1.0 / v;
}

// f(z) = a z:  u = z e^{-a t}
inline Complex linear_flow(Complex z, double t, Complex a) { return z * std::exp(-a * t); }

// Abel intertwiner of the parabolic_nonauto family, exact finite-n value:
// sigma_n(z) = z (n+2) / (1 + n (1-z)), limit z/(1-z).
inline Complex abel_sigma_exact_n(Complex z, double n) {
  return z * (n + 2.0) / (1.0 + n * (1.0 - z));
}
inline Complex abel_sigma_limit(Complex z) { return z / (1.0 - z); }

inline Complex hyperbolic_koenigs_limit(Complex z) { return (1.0 - z) / (1.0 + z); }

// ---- Independent derivative oracles ----

// Derivatives 0..3 by trapezoidal quadrature of the Cauchy integral over a
// ring of radius r: robust against the 1/h^k noise blowup of small-step
// stencils, spectrally accurate for analytic integrands.
template <class F>
std::array<Complex, 4> contour_jet(F&& f, Complex z, double r, int n_samples = 64) {
  std::array<Complex, 4> acc{};
  for (int j = 0; j < n_samples; ++j) {
    double th = 2.0 * std::numbers::pi * j / n_samples;
    Complex w = std::polar(r, th);
    Complex fv = f(z + w);
    for (int k = 0; k < 4; ++k) acc[k] += fv * std::polar(1.0, -k * th);
  }
  static const double factorial[] = {1.0, 1.0, 2.0, 6.0};
  for (int k = 0; k < 4; ++k) acc[k] *= factorial[k] / (static_cast<double>(n_samples) * std::pow(r, k));
  return acc;
}

// 4th-order central differences along the real direction.
template <class F>
Complex fd4_deriv1(F&& f, Complex z, double h) {
  return (-f(z + 2 * h) + 8.0 * f(z + h) - 8.0 * f(z - h) + f(z - 2 * h)) / (12.0 * h);
}

template <class F>
Complex fd4_deriv2(F&& f, Complex z, double h) {
  return (-f(z + 2 * h) + 16.0 * f(z + h) - 30.0 * f(z) + 16.0 * f(z - h) - f(z - 2 * h)) /
         (12.0 * h * h);
}

template <class F>
Complex fd4_deriv3(F&& f, Complex z, double h) {
  return (f(z - 3 * h) / 8.0 - f(z - 2 * h) + 13.0 / 8.0 * f(z - h) - 13.0 / 8.0 * f(z + h) +
          f(z + 2 * h) - f(z + 3 * h) / 8.0) /
         (h * h * h);
}

inline double rel_err(Complex got, Complex want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

// ---- Deterministic random inputs ----

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double uniform(double a, double b) {
    // Fixed-width mantissa draw so results do not depend on the standard
    // library's distribution implementation.
    double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
  }
  int uniform_int(int a, int b) {
    return a + static_cast<int>(gen() % static_cast<std::uint64_t>(b - a + 1));
  }
  Complex disk_point(double rmax) {
    double r = std::sqrt(uniform(0.0, 1.0)) * rmax;
    double th = uniform(0.0, 2.0 * std::numbers::pi);
    return std::polar(r, th);
  }
  Complex box_point(double m) { return {uniform(-m, m), uniform(-m, m)}; }
};

// Random polynomial of degree <= max_deg as a coefficient vector plus the
// matching Horner-form AST (canonical, so it round-trips).
struct Poly {
  std::vector<Complex> coeffs;

  Complex deriv(Complex z, int order) const {
    std::vector<Complex> c = coeffs;
    for (int k = 0; k < order; ++k) {
      std::vector<Complex> d;
      for (std::size_t j = 1; j < c.size(); ++j) d.push_back(static_cast<double>(j) * c[j]);
      c = std::move(d);
    }
    Complex acc = 0.0;
    for (std::size_t j = c.size(); j-- > 0;) acc = acc * z + c[j];
    return acc;
  }

  semiflow::expr::AnalyticExpr to_expr() const {
    using namespace semiflow::expr;
    AnalyticExpr acc = constant(coeffs.back());
    for (std::size_t j = coeffs.size() - 1; j-- > 0;)
      acc = add(constant(coeffs[j]), mul(var(), std::move(acc)));
    return acc;
  }
};

inline Poly random_poly(Rng& rng, int max_deg) {
  Poly p;
  int deg = rng.uniform_int(1, max_deg);
  for (int j = 0; j <= deg; ++j) p.coeffs.push_back(rng.box_point(2.0));
  return p;
}

// Random parser-reachable expression tree.
inline semiflow::expr::AnalyticExpr random_expr(Rng& rng, int depth) {
  using namespace semiflow::expr;
  if (depth <= 0) {
    switch (rng.uniform_int(0, 4)) {
      case 0: return var();
      case 1: return constant(static_cast<double>(rng.uniform_int(-5, 9)));
      case 2: return constant(rng.uniform(-3.0, 3.0));
      case 3: return constant(Complex(0.0, 1.0));
      default: return mul(constant(rng.uniform(0.1, 2.0)), var());
    }
  }
  switch (rng.uniform_int(0, 8)) {
    case 0: return add(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 1: return sub(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 2: return mul(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 3: return div(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 4: return neg(random_expr(rng, depth - 1));
    case 5: return pow_int(random_expr(rng, depth - 1), rng.uniform_int(-3, 6));
    case 6: return exp_of(random_expr(rng, depth - 1));
    case 7: return log_of(random_expr(rng, depth - 1));
    default: return sqrt_of(random_expr(rng, depth - 1));
  }
}

}  // namespace oracles
