#include "semiflow/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "semiflow/extrapolate.hpp"

namespace semiflow::boundary {

using expr::Jet3;
using flow::GeneratorSpec;
using flow::IntegratorConfig;

const char* dw_kind_name(DwKind kind) {
  switch (kind) {
    case DwKind::Dilation: return "Dilation";
    case DwKind::Hyperbolic: return "Hyperbolic";
    case DwKind::ParabolicAutomorphic: return "ParabolicAutomorphic";
    case DwKind::ParabolicNonautomorphic: return "ParabolicNonautomorphic";
    case DwKind::AutomorphismGroupElliptic: return "AutomorphismGroupElliptic";
  }
  return "?";
}

Path Path::stolz_ray(double angle) {
  if (!(std::abs(angle) < std::numbers::pi / 2 - 0.05))
    throw Error(ErrorCode::InvalidParameter, "Stolz ray angle must stay inside the disk");
  return Path{angle};
}

double poincare_distance(Complex z, Complex w) {
  if (!(std::abs(z) < 1.0) || !(std::abs(w) < 1.0))
    throw Error(ErrorCode::DomainError, "poincare_distance arguments must lie in the open disk");
  double m = std::abs((z - w) / (1.0 - std::conj(w) * z));
  if (m >= 1.0)
    throw Error(ErrorCode::DomainError, "points too close to the boundary to resolve");
  return std::atanh(m);
}

AngularLimit angular_limit(const expr::AnalyticExpr& e, Complex tau, int order, Path path,
                           int depth, double h0) {
  if (order < 0 || order > 3) throw Error(ErrorCode::InvalidParameter, "order must be in 0..3");
  double at = std::abs(tau);
  if (std::abs(at - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidParameter, "tau must lie on the unit circle");
  tau /= at;
  if (depth < 4 || depth > 40) throw Error(ErrorCode::InvalidParameter, "depth must be in 4..40");

  Complex dir = std::polar(1.0, path.angle);
  std::vector<Complex> samples;
  samples.reserve(depth + 1);
  double h = h0;
  for (int k = 0; k <= depth; ++k, h *= 0.5) {
    Complex z = tau * (1.0 - h * dir);
    Jet3 j = expr::eval_jet(e, z);
    switch (order) {
      case 0: samples.push_back(j.c0); break;
      case 1: samples.push_back(j.c1); break;
      case 2: samples.push_back(j.c2); break;
      default: samples.push_back(j.c3); break;
    }
  }

  if (numeric::tail_divergent(samples))
    throw Error(ErrorCode::Divergent, "derivative samples do not settle approaching tau");

  numeric::Extrapolation ex = numeric::richardson_limit(samples);
  return AngularLimit{ex.value, ex.error_estimate};
}

BoundaryTaylor boundary_taylor(const expr::AnalyticExpr& e, Complex tau, int k) {
  if (k < 0 || k > 3) throw Error(ErrorCode::InvalidParameter, "k must be in 0..3");
  if (std::abs(std::abs(tau) - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidParameter, "tau must lie on the unit circle");
  tau /= std::abs(tau);

  BoundaryTaylor out;
  out.tau = tau;
  for (int j = 0; j <= k; ++j) out.coeffs.push_back(angular_limit(e, tau, j).value);

  static const double factorial[] = {1.0, 1.0, 2.0, 6.0};
  double one_minus_r = 0.4;
  for (int j = 0; j < 8; ++j, one_minus_r *= 0.5) {
    double r = 1.0 - one_minus_r;
    Complex z = tau * r;
    Complex taylor = 0.0;
    Complex dz = z - tau;
    Complex p = 1.0;
    for (int m = 0; m <= k; ++m, p *= dz) taylor += out.coeffs[m] / factorial[m] * p;
    double gamma_abs = std::abs(expr::eval(e, z) - taylor);
    double scale = std::pow(std::abs(dz), k);
    out.remainder_decay.emplace_back(r, gamma_abs / scale);
  }
  return out;
}

namespace {

// (e^w - 1)/w, 2(cosh w - 1)/w^2 and sinh(w)/w with small-argument series so
// the beta -> 0 limits are continuous.
Complex expm1_over(Complex w) {
  if (std::abs(w) < 1e-3)
    return 1.0 + w * (0.5 + w * (1.0 / 6.0 + w * (1.0 / 24.0 + w / 120.0)));
  return (std::exp(w) - 1.0) / w;
}

Complex coshm1_over(Complex w) {
  if (std::abs(w) < 1e-2) {
    Complex w2 = w * w;
    return 1.0 + w2 * (1.0 / 12.0 + w2 / 360.0);
  }
  return 2.0 * (std::cosh(w) - 1.0) / (w * w);
}

Complex sinh_over(Complex w) {
  if (std::abs(w) < 1e-2) {
    Complex w2 = w * w;
    return 1.0 + w2 * (1.0 / 6.0 + w2 / 120.0);
  }
  return std::sinh(w) / w;
}

bool finite_c(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

Complex nan_c() {
  return Complex(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
}

}  // namespace

Complex dw_flow_derivative(Complex beta, Complex alpha, Complex gamma, double t, int order) {
  if (order < 1 || order > 3) throw Error(ErrorCode::InvalidParameter, "order must be in 1..3");
  if (std::abs(beta) < 1e-12) beta = 0.0;
  Complex x = beta * t;
  switch (order) {
    case 1:
      return std::exp(-x);
    case 2:
      // (alpha/beta) e^{-x}(e^{-x}-1) = -alpha t e^{-x} (e^{-x}-1)/(-x)
      return -alpha * t * std::exp(-x) * expm1_over(-x);
    default:
      // (3a^2/(2b^2) + g/(2b)) e^{-3x} - 3(a^2/b^2) e^{-2x} + (3a^2/(2b^2) - g/(2b)) e^{-x}
      // regrouped around e^{-2x} with the removable singularities factored out.
      return std::exp(-2.0 * x) *
             (1.5 * alpha * alpha * t * t * coshm1_over(x) - gamma * t * sinh_over(x));
  }
}

namespace {

struct NewtonResult {
  Complex root;
  double residual;
  bool found = false;
};

NewtonResult newton_null_point(const GeneratorSpec& g, Complex seed, const DwSearchConfig& sc) {
  Complex x = seed;
  for (int it = 0; it < sc.newton_max; ++it) {
    Jet3 j;
    try {
      j = expr::eval_jet(g.f, x);
    } catch (const Error&) {
      return {};
    }
    if (std::abs(j.c0) < sc.newton_tol) {
      // Polish to stagnation. A double root on the circle satisfies
      // |f| < tol while still ~sqrt(tol) away from it, and Newton contracts
      // only linearly there, so the tail needs room to resolve whether the
      // root is genuinely interior.
      for (int p = 0; p < 80; ++p) {
        Jet3 jp;
        try {
          jp = expr::eval_jet(g.f, x);
        } catch (const Error&) {
          break;
        }
        if (jp.c1 == Complex(0.0)) break;
        Complex step = jp.c0 / jp.c1;
        if (!finite_c(step)) break;
        x -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
      }
      double res = std::abs(expr::eval(g.f, x));
      return {x, res, res < sc.newton_tol};
    }
    if (j.c1 == Complex(0.0)) return {};
    Complex step = j.c0 / j.c1;
    if (!finite_c(step)) return {};
    x -= step;
    if (std::abs(x) > 2.0) return {};
  }
  return {};
}

Complex extrapolate_orbit_limit(const std::vector<Complex>& orbit) {
  // Orbit limit via polynomial extrapolation in 1/n over a dyadic tail;
  // exact for geometric convergence, O(1/n^4) for parabolic orbits.
  std::size_t n = orbit.size();
  std::vector<double> xs;
  std::vector<Complex> ys;
  for (std::size_t d : {8u, 4u, 2u, 1u}) {
    std::size_t idx = n / d;
    if (idx == 0) continue;
    xs.push_back(1.0 / static_cast<double>(idx));
    ys.push_back(orbit[idx - 1]);
  }
  return numeric::neville_to_zero(xs, ys);
}

}  // namespace

DwClassification dw_point(const GeneratorSpec& g, const IntegratorConfig& cfg,
                          const DwSearchConfig& search) {
  DwClassification out;
  out.diagnostics.residuals.assign(7, std::numeric_limits<double>::quiet_NaN());
  auto& resid = out.diagnostics.residuals;

  std::vector<Complex> seeds;
  if (g.declared_dw && std::abs(*g.declared_dw) < 1.0 - search.interior_margin)
    seeds.push_back(*g.declared_dw);
  for (Complex s : {Complex(0, 0), Complex(0.5, 0), Complex(-0.5, 0), Complex(0, 0.5),
                    Complex(0, -0.5), Complex(0.5, 0.5), Complex(0.5, -0.5), Complex(-0.5, 0.5),
                    Complex(-0.5, -0.5)})
    seeds.push_back(s);

  for (Complex seed : seeds) {
    NewtonResult nr = newton_null_point(g, seed, search);
    if (!nr.found || std::abs(nr.root) > 1.0 - search.interior_margin) continue;

    Jet3 j = expr::eval_jet(g.f, nr.root);
    out.tau = nr.root;
    out.beta = j.c1;
    out.alpha = j.c2;
    out.gamma = j.c3;
    if (std::abs(j.c1.real()) <= search.elliptic_re_tol) {
      out.kind = DwKind::AutomorphismGroupElliptic;
    } else if (j.c1.real() > 0.0) {
      out.kind = DwKind::Dilation;
    } else {
      throw Error(ErrorCode::NotAGenerator,
                  "interior null point with Re f' < 0 cannot generate a semigroup");
    }
    out.diagnostics.orbit_separation = std::numeric_limits<double>::quiet_NaN();
    resid[0] = nr.residual;
    resid[1] = resid[2] = resid[3] = 0.0;
    resid[6] = j.c2.real();
    return out;
  }

  // Boundary fallback: follow the time-one orbit of 0. Stop early once the
  // orbit is numerically on the circle (geometric convergence gets there fast).
  std::vector<Complex> orbit;
  orbit.reserve(search.orbit_max);
  {
    Complex w = 0.0;
    for (int k = 0; k < search.orbit_max; ++k) {
      w = flow::map_at(g, w, 1.0, cfg);
      orbit.push_back(w);
      if (std::abs(w) >= 1.0 - 1e-14) break;
    }
  }
  Complex tau_est;
  if (g.declared_dw && std::abs(std::abs(*g.declared_dw) - 1.0) < 1e-9) {
    tau_est = *g.declared_dw;
  } else {
    tau_est = extrapolate_orbit_limit(orbit);
  }
  if (std::abs(orbit.back()) < 0.99 || std::abs(std::abs(tau_est) - 1.0) > 0.02)
    throw Error(ErrorCode::NoConvergence, "orbit of 0 did not cluster at a boundary point");
  Complex tau = tau_est / std::abs(tau_est);
  out.tau = tau;

  AngularLimit beta = angular_limit(g.f, tau, 1);
  out.beta = beta.value;
  resid[1] = beta.error_estimate;
  try {
    AngularLimit a = angular_limit(g.f, tau, 2);
    out.alpha = a.value;
    resid[2] = a.error_estimate;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Divergent) throw;
    out.alpha = nan_c();
  }
  try {
    AngularLimit c = angular_limit(g.f, tau, 3);
    out.gamma = c.value;
    resid[3] = c.error_estimate;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Divergent) throw;
    out.gamma = nan_c();
  }
  {
    double one_minus_r = 0.25 * std::pow(0.5, 20);
    resid[0] = std::abs(expr::eval(g.f, tau * (1.0 - one_minus_r)));
  }
  resid[6] = out.alpha.real();

  double beta_abs = std::abs(out.beta);
  if (beta_abs >= search.ambiguous_beta_tol) {
    if (!(out.beta.real() > 0.0) ||
        std::abs(out.beta.imag()) > 1e-6 * std::max(1.0, beta_abs) + 10.0 * beta.error_estimate)
      throw Error(ErrorCode::AmbiguousType,
                  "boundary derivative of the generator is not positive real");
    out.kind = DwKind::Hyperbolic;
    out.diagnostics.orbit_separation = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  if (beta_abs >= search.parabolic_beta_tol)
    throw Error(ErrorCode::AmbiguousType,
                "boundary derivative magnitude falls in the undecidable band");

  // Parabolic: decide the subtype from the hyperbolic orbit separation.
  int m = std::min<int>(search.separation_iters, static_cast<int>(orbit.size()) - 1);
  std::vector<double> sep;
  sep.reserve(m);
  for (int n = 0; n < m; ++n) sep.push_back(poincare_distance(orbit[n], orbit[n + 1]));

  int tail = std::min(search.separation_tail, m);
  std::vector<double> xs, ys;
  for (int i = m - tail; i < m; ++i) {
    xs.push_back(1.0 / static_cast<double>(i + 1));
    ys.push_back(sep[i]);
  }
  auto [limit, lin_coeff] = numeric::fit_affine(xs, ys);
  (void)lin_coeff;

  std::vector<double> ns(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ns[i] = 1.0 / xs[i];
  auto [ignored, slope] = numeric::fit_affine(ns, ys);
  (void)ignored;

  out.diagnostics.orbit_separation = limit;
  resid[4] = sep.back();
  resid[5] = slope;
  out.kind = limit > search.separation_floor ? DwKind::ParabolicAutomorphic
                                             : DwKind::ParabolicNonautomorphic;
  return out;
}

DerivativeCheck verify_dw_flow_derivative(const GeneratorSpec& g, double t, int order,
                                          const IntegratorConfig& cfg, int depth) {
  if (order < 1 || order > 3) throw Error(ErrorCode::InvalidParameter, "order must be in 1..3");
  if (depth < 4 || depth > 20) throw Error(ErrorCode::InvalidParameter, "depth must be in 4..20");

  DwClassification dw = dw_point(g, cfg);
  if (dw.kind == DwKind::Dilation || dw.kind == DwKind::AutomorphismGroupElliptic)
    throw Error(ErrorCode::DomainError, "generator has an interior Denjoy-Wolff point");

  bool parabolic = dw.kind == DwKind::ParabolicAutomorphic ||
                   dw.kind == DwKind::ParabolicNonautomorphic;
  Complex beta_eff = parabolic ? Complex(0.0) : dw.beta;
  if (order >= 2 && !finite_c(dw.alpha))
    throw Error(ErrorCode::Divergent, "second derivative of the generator has no boundary limit");
  if (order >= 3 && !finite_c(dw.gamma))
    throw Error(ErrorCode::Divergent, "third derivative of the generator has no boundary limit");

  DerivativeCheck out;
  out.predicted = dw_flow_derivative(beta_eff, dw.alpha, dw.gamma, t, order);

  std::vector<Complex> samples;
  samples.reserve(depth + 1);
  double h = 0.25;
  for (int k = 0; k <= depth; ++k, h *= 0.5) {
    Complex z = dw.tau * (1.0 - h);
    flow::FlowJet fj = flow::evolve(g, z, t, order, cfg);
    switch (order) {
      case 1: samples.push_back(fj.u1); break;
      case 2: samples.push_back(fj.u2); break;
      default: samples.push_back(fj.u3); break;
    }
  }
  if (numeric::tail_divergent(samples))
    throw Error(ErrorCode::Divergent, "flow-jet samples do not settle approaching tau");

  numeric::Extrapolation ex = numeric::richardson_limit(samples);
  out.measured = ex.value;
  out.measured_error = ex.error_estimate;
  out.residual = std::abs(out.predicted - out.measured);
  return out;
}

}  // namespace semiflow::boundary
