#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "semiflow/flow.hpp"

namespace semiflow::boundary {

using Complex = std::complex<double>;

enum class DwKind {
  Dilation,
  Hyperbolic,
  ParabolicAutomorphic,
  ParabolicNonautomorphic,
  AutomorphismGroupElliptic,
};

const char* dw_kind_name(DwKind kind);

struct DwDiagnostics {
  // Extrapolated limit of the hyperbolic separation rho(F_n(0), F_{n+1}(0));
  // NaN when the point is interior.
  double orbit_separation = 0.0;
  // [0] |f| residual at tau (interior: |f(tau)|; boundary: deepest radial sample)
  // [1] error estimate for beta
  // [2] error estimate for alpha (NaN if the limit diverged)
  // [3] error estimate for gamma (NaN if the limit diverged)
  // [4] last raw separation sample (parabolic only)
  // [5] fitted separation slope over the tail (parabolic only)
  // [6] Re f''(tau), the automorphic-subtype necessary-condition diagnostic
  std::vector<double> residuals;
};

struct DwClassification {
  Complex tau{};
  DwKind kind = DwKind::Dilation;
  Complex beta{};   // f'(tau)
  Complex alpha{};  // f''(tau); NaN if the angular limit diverged
  Complex gamma{};  // f'''(tau); NaN if the angular limit diverged
  DwDiagnostics diagnostics;
};

struct DwSearchConfig {
  int newton_max = 50;
  double newton_tol = 1e-12;
  double interior_margin = 1e-8;   // |tau| <= 1 - margin counts as interior
  int orbit_max = 500;             // time-one iterations for the boundary fallback
  int separation_iters = 200;      // orbit length for the parabolic subtype
  int separation_tail = 20;        // samples in the separation trend fit
  double separation_floor = 1e-3;  // fitted limit above this => automorphic
  double parabolic_beta_tol = 1e-6;
  double ambiguous_beta_tol = 1e-4;  // |beta| in [parabolic, ambiguous) => AmbiguousType
  double elliptic_re_tol = 1e-8;     // |Re beta| below this at an interior point => group
};

// Locates the Denjoy-Wolff point of the semigroup generated by g and
// classifies its type. Interior null points are found by Newton iteration
// from a 9-point seed grid; otherwise the time-one orbit of 0 is followed to
// the boundary. Throws NoConvergence or AmbiguousType.
DwClassification dw_point(const flow::GeneratorSpec& g, const flow::IntegratorConfig& cfg = {},
                          const DwSearchConfig& search = {});

// Approach path for boundary limits: z_k = tau * (1 - h0 * 2^-k * e^{i angle}).
struct Path {
  double angle = 0.0;
  static Path radial() { return {0.0}; }
  static Path stolz_ray(double angle);
};

struct AngularLimit {
  Complex value{};
  double error_estimate = 0.0;
};

// Richardson-extrapolated limit of the order-th derivative of e along the
// given path toward tau (|tau| = 1). Throws Divergent when the sampled
// sequence refuses to settle, and propagates BranchCut from evaluation.
AngularLimit angular_limit(const expr::AnalyticExpr& e, Complex tau, int order,
                           Path path = Path::radial(), int depth = 20, double h0 = 0.25);

struct BoundaryTaylor {
  Complex tau{};
  std::vector<Complex> coeffs;  // a_0 .. a_k (derivative limits)
  // (r, |gamma_k(r tau)| / |r tau - tau|^k) sampled radially
  std::vector<std::pair<double, double>> remainder_decay;
};

BoundaryTaylor boundary_taylor(const expr::AnalyticExpr& e, Complex tau, int k);

// Closed form for the order-th z-derivative of F_t at a boundary Denjoy-Wolff
// point with generator jet (beta, alpha, gamma):
//   order 1: e^{-beta t}
//   order 2: -alpha t                      (beta = 0)
//            (alpha/beta) e^{-bt}(e^{-bt}-1)  otherwise
//   order 3: (3/2) alpha^2 t^2 - gamma t   (beta = 0)
//            the matching three-exponential expression otherwise.
// Evaluated in a uniformly stable form, so tiny |beta| is continuous with
// the beta = 0 branch.
Complex dw_flow_derivative(Complex beta, Complex alpha, Complex gamma, double t, int order);

struct DerivativeCheck {
  Complex predicted{};
  Complex measured{};
  double residual = 0.0;
  double measured_error = 0.0;
};

// Compares the closed form against a radial Richardson extrapolation of the
// integrated flow jet toward the boundary Denjoy-Wolff point.
DerivativeCheck verify_dw_flow_derivative(const flow::GeneratorSpec& g, double t, int order,
                                          const flow::IntegratorConfig& cfg = {}, int depth = 20);

// rho(z, w) = artanh |(z - w) / (1 - conj(w) z)| on the open disk.
double poincare_distance(Complex z, Complex w);

}  // namespace semiflow::boundary
