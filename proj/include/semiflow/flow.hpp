#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semiflow/expr.hpp"

namespace semiflow::flow {

using Complex = std::complex<double>;

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double h_init = 1e-2;
  double h_min = 1e-12;
  long max_steps = 1000000;  // per unit time
};

void validate(const IntegratorConfig& cfg);

// A semigroup generator: the vector field f in u' = -f(u), u(0) = z.
// Construction checks that f evaluates on a 64-point interior grid and that
// a declared interior Denjoy-Wolff point is a null point of f.
struct GeneratorSpec {
  expr::AnalyticExpr f;
  std::optional<Complex> declared_dw;
  std::string label;

  static GeneratorSpec make(expr::AnalyticExpr f, std::optional<Complex> declared_dw = {},
                            std::string label = {});
  static GeneratorSpec parse(std::string_view text, std::string label = {});
};

// State of the flow map and its z-derivatives at (t, z0).
struct FlowJet {
  Complex u{};   // F_t(z0)
  Complex u1{};  // dF_t/dz
  Complex u2{};  // d2F_t/dz2
  Complex u3{};  // d3F_t/dz3
  long steps_accepted = 0;
  long steps_rejected = 0;
  double t = 0.0;
  Complex z0{};
};

// Integrates u' = -f(u) together with the variational equations
//   u1' = -f'(u) u1
//   u2' = -f''(u) u1^2 - f'(u) u2
//   u3' = -f'''(u) u1^3 - 3 f''(u) u1 u2 - f'(u) u3
// from u(0) = z, u1(0) = 1, u2(0) = u3(0) = 0, in unit-time segments.
// Components above `order` are skipped. Pure given (g, cfg); grid sweeps may
// run calls concurrently, results are independent of evaluation order.
FlowJet evolve(const GeneratorSpec& g, Complex z, double t, int order = 0,
               const IntegratorConfig& cfg = {});

// F_t(z) only.
Complex map_at(const GeneratorSpec& g, Complex z, double t, const IntegratorConfig& cfg = {});

// Orbit F_1(z), F_2(z), ..., F_n(z) of the time-one map.
std::vector<Complex> iterate(const GeneratorSpec& g, Complex z, int n,
                             const IntegratorConfig& cfg = {});

// max over the grid of |F_{t+s}(z) - F_t(F_s(z))|.
double semigroup_residual(const GeneratorSpec& g, std::span<const Complex> grid, double t,
                          double s, const IntegratorConfig& cfg = {});

}  // namespace semiflow::flow
