#include "semiflow/commute.hpp"

#include <cmath>

#include "semiflow/grids.hpp"

namespace semiflow::commute {

using flow::GeneratorSpec;
using flow::IntegratorConfig;

std::vector<Complex> default_grid() {
  std::vector<Complex> g = grids::ring(4, 0.3);
  for (Complex z : grids::ring(4, 0.6)) g.push_back(z);
  return g;
}

std::vector<std::pair<double, double>> default_times() {
  return {{0.5, 0.5}, {1, 1}, {1, 2}, {2, 1}, {0.25, 3}};
}

CommuteReport commute_residual(const GeneratorSpec& gF, const GeneratorSpec& gG,
                               std::span<const std::pair<double, double>> ts,
                               std::span<const Complex> grid, const IntegratorConfig& cfg) {
  if (ts.empty() || grid.empty())
    throw Error(ErrorCode::InvalidParameter, "empty time set or grid");

  CommuteReport report;
  report.grid_spec = std::to_string(grid.size()) + " points x " + std::to_string(ts.size()) +
                     " (t,s) pairs";
  for (auto [t, s] : ts) {
    double pair_worst = 0.0;
    for (Complex z : grid) {
      Complex fg = flow::map_at(gF, flow::map_at(gG, z, s, cfg), t, cfg);
      Complex gf = flow::map_at(gG, flow::map_at(gF, z, t, cfg), s, cfg);
      double r = std::abs(fg - gf);
      if (r > pair_worst) pair_worst = r;
      if (r > report.max_residual) {
        report.max_residual = r;
        report.argmax_t = t;
        report.argmax_s = s;
        report.argmax_z = z;
      }
    }
    report.per_pair.push_back({t, s, pair_worst});
  }
  return report;
}

ProportionalityReport proportionality(const GeneratorSpec& gF, const GeneratorSpec& gG,
                                      std::span<const Complex> sample) {
  if (sample.size() < 8)
    throw Error(ErrorCode::InvalidParameter, "proportionality needs at least 8 sample points");

  std::vector<Complex> fv, gv;
  fv.reserve(sample.size());
  gv.reserve(sample.size());
  double gmax = 0.0;
  for (Complex z : sample) {
    fv.push_back(expr::eval(gF.f, z));
    gv.push_back(expr::eval(gG.f, z));
    gmax = std::max(gmax, std::abs(gv.back()));
  }
  std::size_t vanishing = 0;
  for (Complex g : gv)
    if (std::abs(g) <= 1e-14 * std::max(1.0, gmax)) ++vanishing;
  if (2 * vanishing > sample.size())
    throw Error(ErrorCode::DegenerateSample, "g vanishes on more than half of the sample");

  Complex num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < fv.size(); ++i) {
    num += fv[i] * std::conj(gv[i]);
    den += std::norm(gv[i]);
  }
  ProportionalityReport out;
  out.a = num / den;
  out.sample_size = static_cast<int>(sample.size());
  for (std::size_t i = 0; i < fv.size(); ++i)
    out.residual = std::max(out.residual, std::abs(fv[i] - out.a * gv[i]));
  return out;
}

Complex mobius(Complex tau, Complex z) {
  if (!(std::abs(tau) < 1.0))
    throw Error(ErrorCode::DomainError, "mobius center must lie in the open disk");
  if (std::abs(z) > 1.0 + 1e-12)
    throw Error(ErrorCode::DomainError, "mobius argument must lie in the closed disk");
  Complex den = 1.0 - std::conj(tau) * z;
  if (den == Complex(0.0)) throw Error(ErrorCode::DomainError, "mobius denominator vanished");
  return (tau - z) / den;
}

std::function<Complex(Complex)> elliptic_group(Complex tau, double phi, double t) {
  if (!(std::abs(tau) < 1.0))
    throw Error(ErrorCode::DomainError, "fixed point must lie in the open disk");
  Complex rot = std::exp(Complex(0.0, phi * t));
  return [tau, rot](Complex z) { return mobius(tau, rot * mobius(tau, z)); };
}

std::function<Complex(Complex)> lft_semigroup(Complex tau, Complex a, double t) {
  if (!(std::abs(tau) < 1.0))
    throw Error(ErrorCode::DomainError, "fixed point must lie in the open disk");
  if (a.real() < 0.0)
    throw Error(ErrorCode::InvalidParameter, "Re a must be nonnegative for a disk self-map");
  Complex factor = std::exp(-a * t);
  return [tau, factor](Complex z) { return mobius(tau, factor * mobius(tau, z)); };
}

flow::GeneratorSpec hyperbolic_auto_generator(Complex tau, Complex sigma_pt, double a1) {
  if (std::abs(std::abs(tau) - 1.0) > 1e-12 || std::abs(std::abs(sigma_pt) - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidParameter, "fixed points must be unimodular");
  if (tau == sigma_pt)
    throw Error(ErrorCode::InvalidParameter, "fixed points must be distinct");
  if (!(a1 > 0.0)) throw Error(ErrorCode::InvalidParameter, "a1 must be positive");

  using namespace expr;
  AnalyticExpr f = constant(Complex(a1) / (tau - sigma_pt)) * (var() - constant(tau)) *
                   (var() - constant(sigma_pt));
  return flow::GeneratorSpec::make(std::move(f), tau, "hyperbolic-automorphism");
}

double rotation_equivariance(const GeneratorSpec& gG, double phi, double t,
                             std::span<const Complex> grid, const IntegratorConfig& cfg) {
  if (grid.empty()) throw Error(ErrorCode::InvalidParameter, "empty grid");
  Complex rot = std::exp(Complex(0.0, phi));
  double worst = 0.0;
  for (Complex z : grid) {
    Complex a = flow::map_at(gG, rot * z, t, cfg);
    Complex b = rot * flow::map_at(gG, z, t, cfg);
    worst = std::max(worst, std::abs(a - b));
  }
  return worst;
}

}  // namespace semiflow::commute
