#include "semiflow/flow.hpp"

#include <cmath>
#include <numbers>

#include "semiflow/detail/dopri5.hpp"

namespace semiflow::flow {

using expr::Jet3;

void validate(const IntegratorConfig& cfg) {
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0))
    throw Error(ErrorCode::InvalidParameter, "tolerances must be positive");
  if (!(cfg.h_min < cfg.h_init))
    throw Error(ErrorCode::InvalidParameter, "h_min must be smaller than h_init");
  if (cfg.max_steps < 1) throw Error(ErrorCode::InvalidParameter, "max_steps must be >= 1");
}

GeneratorSpec GeneratorSpec::make(expr::AnalyticExpr f, std::optional<Complex> declared_dw,
                                  std::string label) {
  if (!f.valid()) throw Error(ErrorCode::InvalidParameter, "empty generator expression");
  static const double radii[] = {0.15, 0.35, 0.55, 0.75};
  for (double r : radii) {
    for (int k = 0; k < 16; ++k) {
      double th = 2.0 * std::numbers::pi * k / 16.0;
      (void)expr::eval_jet(f, Complex(r * std::cos(th), r * std::sin(th)));
    }
  }
  if (declared_dw) {
    if (std::abs(*declared_dw) > 1.0 + 1e-12)
      throw Error(ErrorCode::InvalidParameter, "declared Denjoy-Wolff point outside the closed disk");
    if (std::abs(*declared_dw) < 1.0 && std::abs(expr::eval(f, *declared_dw)) >= 1e-8)
      throw Error(ErrorCode::InvalidParameter,
                  "declared interior Denjoy-Wolff point is not a null point of f");
  }
  return GeneratorSpec{std::move(f), declared_dw, std::move(label)};
}

GeneratorSpec GeneratorSpec::parse(std::string_view text, std::string label) {
  return make(expr::parse(text), {}, std::move(label));
}

namespace {

template <std::size_t N>
struct FlowRhs {
  const expr::AnalyticExpr& f;

  void operator()(const detail::State<N>& y, detail::State<N>& dy) const {
    Jet3 j = expr::eval_jet(f, y[0]);
    dy[0] = -j.c0;
    if constexpr (N >= 2) dy[1] = -j.c1 * y[1];
    if constexpr (N >= 3) dy[2] = -j.c2 * y[1] * y[1] - j.c1 * y[2];
    if constexpr (N >= 4)
      dy[3] = -j.c3 * y[1] * y[1] * y[1] - 3.0 * j.c2 * y[1] * y[2] - j.c1 * y[3];
  }
};

template <std::size_t N>
bool disk_guard(const detail::State<N>& y) {
  return std::abs(y[0]) < 1.0;
}

template <std::size_t N>
FlowJet evolve_n(const GeneratorSpec& g, Complex z, double t, const IntegratorConfig& cfg) {
  detail::State<N> y{};
  y[0] = z;
  if constexpr (N >= 2) y[1] = 1.0;

  detail::StepControl ctl{cfg.rel_tol, cfg.h_min, cfg.max_steps};
  std::array<double, N> abs_w;
  abs_w.fill(cfg.abs_tol);

  detail::StepStats stats;
  FlowRhs<N> rhs{g.f};
  double h = cfg.h_init;
  double done = 0.0;
  while (done < t) {
    double seg = std::min(1.0, t - done);
    detail::dopri5_integrate<N>(rhs, disk_guard<N>, y, 0.0, seg, ctl, abs_w, h, stats);
    done += seg;
  }

  FlowJet out;
  out.u = y[0];
  if constexpr (N >= 2) out.u1 = y[1];
  if constexpr (N >= 3) out.u2 = y[2];
  if constexpr (N >= 4) out.u3 = y[3];
  out.steps_accepted = stats.accepted;
  out.steps_rejected = stats.rejected;
  out.t = t;
  out.z0 = z;
  return out;
}

}  // namespace

FlowJet evolve(const GeneratorSpec& g, Complex z, double t, int order,
               const IntegratorConfig& cfg) {
  validate(cfg);
  if (!(std::abs(z) < 1.0)) throw Error(ErrorCode::DomainError, "initial point outside the open disk");
  if (!(t >= 0.0)) throw Error(ErrorCode::DomainError, "negative flow time");
  if (order < 0 || order > 3) throw Error(ErrorCode::InvalidParameter, "order must be in 0..3");

  if (t == 0.0) {
    FlowJet out;
    out.u = z;
    out.u1 = order >= 1 ? Complex(1.0) : Complex(0.0);
    out.z0 = z;
    return out;
  }

  FlowJet out;
  switch (order) {
    case 0: out = evolve_n<1>(g, z, t, cfg); break;
    case 1: out = evolve_n<2>(g, z, t, cfg); break;
    case 2: out = evolve_n<3>(g, z, t, cfg); break;
    default: out = evolve_n<4>(g, z, t, cfg); break;
  }
  if (order >= 1 && out.u1 == Complex(0.0))
    throw Error(ErrorCode::Overflow, "first variation underflowed to zero");
  return out;
}

Complex map_at(const GeneratorSpec& g, Complex z, double t, const IntegratorConfig& cfg) {
  return evolve(g, z, t, 0, cfg).u;
}

std::vector<Complex> iterate(const GeneratorSpec& g, Complex z, int n,
                             const IntegratorConfig& cfg) {
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "iteration count must be >= 1");
  std::vector<Complex> orbit;
  orbit.reserve(n);
  Complex w = z;
  for (int k = 0; k < n; ++k) {
    w = map_at(g, w, 1.0, cfg);
    orbit.push_back(w);
  }
  return orbit;
}

double semigroup_residual(const GeneratorSpec& g, std::span<const Complex> grid, double t,
                          double s, const IntegratorConfig& cfg) {
  if (!(t >= 0.0) || !(s >= 0.0)) throw Error(ErrorCode::DomainError, "times must be nonnegative");
  double worst = 0.0;
  for (Complex z : grid) {
    Complex direct = map_at(g, z, t + s, cfg);
    Complex composed = map_at(g, map_at(g, z, s, cfg), t, cfg);
    worst = std::max(worst, std::abs(direct - composed));
  }
  return worst;
}

}  // namespace semiflow::flow
