#include "semiflow/koenigs.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "semiflow/detail/dopri5.hpp"
#include "semiflow/grids.hpp"

namespace semiflow::koenigs {

using boundary::DwClassification;
using boundary::DwKind;
using expr::Jet3;
using flow::GeneratorSpec;
using flow::IntegratorConfig;

namespace {

constexpr double kDeltaSwitch = 1e-4;       // jet expansion below, direct eval above
constexpr double kDeltaSwitchLinear = 1e-6; // when only f' is available at tau
constexpr double kStopTol = 1e-12;
constexpr int kSchroederCap = 10000;

bool finite_c(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

IntegratorConfig tightened(IntegratorConfig cfg) {
  cfg.rel_tol = std::min(cfg.rel_tol, 1e-11);
  cfg.abs_tol = std::min(cfg.abs_tol, 1e-12);
  return cfg;
}

// Distance flow for an interior fixed point: D = tau - u satisfies
// D' = f(tau - D), expanded through the generator jet at tau when D is small
// so D keeps full relative precision as the orbit contracts.
struct InteriorDistanceRhs {
  const expr::AnalyticExpr& f;
  Complex tau;
  std::array<Complex, 4> jet;

  void operator()(const detail::State<1>& y, detail::State<1>& dy) const {
    Complex d = y[0];
    if (std::abs(d) >= kDeltaSwitch) {
      dy[0] = expr::eval(f, tau - d);
    } else {
      dy[0] = jet[0] - d * (jet[1] - d * (0.5 * jet[2] - d * (jet[3] / 6.0)));
    }
  }
};

// Distance flow for a boundary fixed point rotated to 1: W = 1 - conj(tau) u
// satisfies W' = fhat(1 - W) with fhat(w) = conj(tau) f(tau w). Two
// independent components track the orbits of z and of 0.
struct BoundaryDistanceRhs {
  const expr::AnalyticExpr& f;
  Complex tau;
  std::array<Complex, 4> jet;  // {0, beta, tau*alpha, tau^2*gamma}
  int jet_order;
  double delta;

  Complex one(Complex w) const {
    if (std::abs(w) >= delta) return std::conj(tau) * expr::eval(f, tau * (1.0 - w));
    Complex acc = -jet[1] * w;
    if (jet_order >= 2) acc += 0.5 * jet[2] * w * w;
    if (jet_order >= 3) acc -= jet[3] * w * w * w / 6.0;
    return acc;
  }

  void operator()(const detail::State<2>& y, detail::State<2>& dy) const {
    dy[0] = one(y[0]);
    dy[1] = one(y[1]);
  }
};

// Orbit-difference flow for the Abel construction: alongside the base orbit
// b' = -f(b), the differences A = F_t(z) - F_t(0) and B = F_t(F_1(0)) - F_t(0)
// satisfy X' = -(f(b + X) - f(b)), evaluated through the jet of f at b when X
// is small. sigma_n(z) = A(n)/B(n).
struct AbelRhs {
  const expr::AnalyticExpr& f;

  static Complex diff(const Jet3& j, Complex b, Complex x, const expr::AnalyticExpr& f) {
    if (std::abs(x) >= kDeltaSwitch) return expr::eval(f, b + x) - j.c0;
    return x * (j.c1 + x * (0.5 * j.c2 + x * (j.c3 / 6.0)));
  }

  void operator()(const detail::State<3>& y, detail::State<3>& dy) const {
    Jet3 j = expr::eval_jet(f, y[0]);
    dy[0] = -j.c0;
    dy[1] = -diff(j, y[0], y[1], f);
    dy[2] = -diff(j, y[0], y[2], f);
  }
};

// Inside-the-disk test for a distance variable: |1 - W| < 1 evaluated without
// cancellation as 2 Re W > |W|^2.
bool distance_inside(Complex w) { return 2.0 * w.real() > std::norm(w); }

template <std::size_t N, class RHS, class Guard, class Callback>
void integrate_grid(RHS&& rhs, Guard&& guard, detail::State<N>& y, std::span<const double> times,
                    const IntegratorConfig& cfg, const std::array<double, N>& abs_w,
                    Callback&& cb) {
  detail::StepControl ctl{cfg.rel_tol, cfg.h_min, cfg.max_steps};
  double h = cfg.h_init;
  double t = 0.0;
  detail::StepStats stats;
  for (double tc : times) {
    detail::dopri5_integrate<N>(rhs, guard, y, t, tc, ctl, abs_w, h, stats);
    t = tc;
    cb(tc, y);
  }
}

struct SequenceStop {
  Complex accelerated{};
  Complex raw{};
  int n_stop = 0;
  double estimate = 0.0;
};

// Walks kappa_n (or h_n), applies the known-ratio elimination
// acc_n = (s_n - mu s_{n-1}) / (1 - mu), and stops when the accelerated
// sequence settles or its differences stop improving.
class GeometricStopper {
 public:
  explicit GeometricStopper(Complex mu) : mu_(mu) {}

  // returns true when iteration should stop
  bool push(Complex s) {
    ++n_;
    if (n_ >= 2) {
      Complex acc = (s - mu_ * prev_) / (1.0 - mu_);
      if (have_acc_) {
        double d = std::abs(acc - acc_prev_);
        if (d < best_diff_) {
          best_diff_ = d;
          best_n_ = n_;
        }
        last_diff_ = d;
        done_ = d < kStopTol * (1.0 + std::abs(acc)) || (n_ - best_n_) >= 5;
      }
      acc_prev_ = acc;
      have_acc_ = true;
    }
    prev_ = s;
    return done_;
  }

  SequenceStop finish() const {
    SequenceStop out;
    out.accelerated = acc_prev_;
    out.raw = prev_;
    out.n_stop = n_;
    out.estimate = std::min(best_diff_, last_diff_) + 1e-13 * (1.0 + std::abs(acc_prev_));
    return out;
  }

 private:
  Complex mu_;
  Complex prev_{};
  Complex acc_prev_{};
  bool have_acc_ = false;
  bool done_ = false;
  int n_ = 0;
  double best_diff_ = std::numeric_limits<double>::infinity();
  double last_diff_ = std::numeric_limits<double>::infinity();
  int best_n_ = 0;
};

}  // namespace

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::InteriorSchroeder: return "InteriorSchroeder";
    case ModelKind::BoundarySchroeder: return "BoundarySchroeder";
    case ModelKind::Abel: return "Abel";
  }
  return "?";
}

KoenigsModel::Pair KoenigsModel::run(Complex z) const {
  if (!(std::abs(z) < 1.0)) throw Error(ErrorCode::DomainError, "evaluation point outside the disk");

  switch (kind_) {
    case ModelKind::InteriorSchroeder: {
      Complex d0 = tau_ - z;
      if (d0 == Complex(0.0)) return {0.0, 0.0};
      InteriorDistanceRhs rhs{base_.f, tau_, jet_};
      auto guard = [this](const detail::State<1>& y) { return std::abs(tau_ - y[0]) < 1.0; };
      detail::State<1> y{d0};
      GeometricStopper stop(*mu_);
      // run the recipe to n_used_, feeding kappa_n = -D_n e^{beta n}
      detail::StepControl ctl{cfg_.rel_tol, cfg_.h_min, cfg_.max_steps};
      std::array<double, 1> abs_w{1e-30};
      double h = cfg_.h_init;
      detail::StepStats stats;
      for (int n = 1; n <= n_used_; ++n) {
        detail::dopri5_integrate<1>(rhs, guard, y, 0.0, 1.0, ctl, abs_w, h, stats);
        stop.push(-y[0] * std::exp(beta_ * static_cast<double>(n)));
      }
      SequenceStop s = stop.finish();
      return {s.accelerated, s.raw};
    }
    case ModelKind::BoundarySchroeder: {
      BoundaryDistanceRhs rhs{base_.f, tau_, jet_, jet_order_,
                              jet_order_ >= 2 ? kDeltaSwitch : kDeltaSwitchLinear};
      auto guard = [](const detail::State<2>& y) {
        return distance_inside(y[0]) && distance_inside(y[1]);
      };
      detail::State<2> y{1.0 - std::conj(tau_) * z, Complex(1.0)};
      GeometricStopper stop(*mu_);
      detail::StepControl ctl{cfg_.rel_tol, cfg_.h_min, cfg_.max_steps};
      std::array<double, 2> abs_w{1e-30, 1e-30};
      double h = cfg_.h_init;
      detail::StepStats stats;
      for (int n = 1; n <= n_used_; ++n) {
        detail::dopri5_integrate<2>(rhs, guard, y, 0.0, 1.0, ctl, abs_w, h, stats);
        stop.push(y[0] / y[1]);
      }
      SequenceStop s = stop.finish();
      return {s.accelerated, s.raw};
    }
    case ModelKind::Abel: {
      Complex b1 = flow::map_at(base_, 0.0, 1.0, cfg_);
      AbelRhs rhs{base_.f};
      auto guard = [](const detail::State<3>& y) {
        return std::abs(y[0]) < 1.0 && std::abs(y[0] + y[1]) < 1.0 && std::abs(y[0] + y[2]) < 1.0;
      };
      detail::State<3> y{Complex(0.0), z, b1};
      std::array<double, 3> abs_w{cfg_.abs_tol, 1e-30, 1e-30};
      double n = n_used_;
      std::vector<double> times{n / 8, n / 4, n / 2, n};
      std::vector<Complex> sigma;
      integrate_grid<3>(rhs, guard, y, times, cfg_, abs_w,
                        [&](double, const detail::State<3>& s) { sigma.push_back(s[1] / s[2]); });
      Complex accelerated = 2.0 * sigma[3] - sigma[2];
      return {accelerated, sigma[3]};
    }
  }
  throw Error(ErrorCode::InvalidParameter, "corrupt model kind");
}

Complex KoenigsModel::eval(Complex z) const { return run(z).accelerated; }
Complex KoenigsModel::eval_raw(Complex z) const { return run(z).raw; }

namespace {

// Stopping run used at construction time to choose n_used and the
// convergence estimate: iterate at a few calibration points with the
// adaptive stop, keep the worst case.
template <class SequenceFn>
std::pair<int, double> calibrate(SequenceFn&& one_point) {
  int n_used = 0;
  double estimate = 0.0;
  for (Complex z : {Complex(0.3, 0.0), Complex(-0.25, 0.2), Complex(0.0, 0.45)}) {
    SequenceStop s = one_point(z);
    n_used = std::max(n_used, s.n_stop);
    estimate = std::max(estimate, s.estimate);
  }
  return {n_used, estimate};
}

}  // namespace

KoenigsModel schroeder_interior(const GeneratorSpec& g, const IntegratorConfig& cfg) {
  DwClassification dw = boundary::dw_point(g, cfg);
  if (dw.kind != DwKind::Dilation)
    throw Error(ErrorCode::NotDilation, std::string("generator is of kind ") +
                                            boundary::dw_kind_name(dw.kind));

  KoenigsModel m;
  m.kind_ = ModelKind::InteriorSchroeder;
  m.base_ = g;
  m.cfg_ = tightened(cfg);

  // Polish tau to machine precision: kappa_n multiplies the fixed-point
  // offset by e^{beta n}, so Newton-tolerance residue is not good enough.
  Complex tau = dw.tau;
  for (int i = 0; i < 3; ++i) {
    Jet3 j = expr::eval_jet(g.f, tau);
    if (j.c1 == Complex(0.0)) break;
    tau -= j.c0 / j.c1;
  }
  Jet3 j = expr::eval_jet(g.f, tau);
  m.tau_ = tau;
  m.beta_ = j.c1;
  m.jet_ = {j.c0, j.c1, j.c2, j.c3};
  m.jet_order_ = 3;
  Complex mu = std::exp(-j.c1);
  m.mu_ = mu;
  if (std::abs(mu) > 0.999)
    throw Error(ErrorCode::SlowConvergence, "Schroeder multiplier too close to the unit circle");

  auto [n_used, estimate] = calibrate([&](Complex z) {
    InteriorDistanceRhs rhs{m.base_.f, m.tau_, m.jet_};
    auto guard = [&](const detail::State<1>& y) { return std::abs(m.tau_ - y[0]) < 1.0; };
    detail::State<1> y{m.tau_ - z};
    GeometricStopper stop(mu);
    detail::StepControl ctl{m.cfg_.rel_tol, m.cfg_.h_min, m.cfg_.max_steps};
    std::array<double, 1> abs_w{1e-30};
    double h = m.cfg_.h_init;
    detail::StepStats stats;
    int n = 0;
    while (n < kSchroederCap) {
      detail::dopri5_integrate<1>(rhs, guard, y, 0.0, 1.0, ctl, abs_w, h, stats);
      ++n;
      if (stop.push(-y[0] * std::exp(m.beta_ * static_cast<double>(n)))) break;
    }
    return stop.finish();
  });
  m.n_used_ = n_used;
  m.convergence_estimate_ = estimate;
  return m;
}

KoenigsModel schroeder_hyperbolic(const GeneratorSpec& g, const IntegratorConfig& cfg) {
  DwClassification dw = boundary::dw_point(g, cfg);
  if (dw.kind != DwKind::Hyperbolic)
    throw Error(ErrorCode::NotHyperbolic, std::string("generator is of kind ") +
                                              boundary::dw_kind_name(dw.kind));

  KoenigsModel m;
  m.kind_ = ModelKind::BoundarySchroeder;
  m.base_ = g;
  m.cfg_ = tightened(cfg);
  m.tau_ = dw.tau;
  m.beta_ = dw.beta;
  m.jet_ = {0.0, dw.beta, 0.0, 0.0};
  m.jet_order_ = 1;
  if (finite_c(dw.alpha)) {
    m.jet_[2] = dw.tau * dw.alpha;
    m.jet_order_ = 2;
    if (finite_c(dw.gamma)) {
      m.jet_[3] = dw.tau * dw.tau * dw.gamma;
      m.jet_order_ = 3;
    }
  }
  Complex mu = std::exp(-dw.beta);
  m.mu_ = mu;
  if (std::abs(mu) > 0.999)
    throw Error(ErrorCode::SlowConvergence, "Schroeder multiplier too close to the unit circle");

  auto [n_used, estimate] = calibrate([&](Complex z) {
    BoundaryDistanceRhs rhs{m.base_.f, m.tau_, m.jet_, m.jet_order_,
                            m.jet_order_ >= 2 ? kDeltaSwitch : kDeltaSwitchLinear};
    auto guard = [](const detail::State<2>& y) {
      return distance_inside(y[0]) && distance_inside(y[1]);
    };
    detail::State<2> y{1.0 - std::conj(m.tau_) * z, Complex(1.0)};
    GeometricStopper stop(mu);
    detail::StepControl ctl{m.cfg_.rel_tol, m.cfg_.h_min, m.cfg_.max_steps};
    std::array<double, 2> abs_w{1e-30, 1e-30};
    double h = m.cfg_.h_init;
    detail::StepStats stats;
    int n = 0;
    while (n < kSchroederCap) {
      detail::dopri5_integrate<2>(rhs, guard, y, 0.0, 1.0, ctl, abs_w, h, stats);
      ++n;
      if (stop.push(y[0] / y[1])) break;
    }
    return stop.finish();
  });
  m.n_used_ = n_used;
  m.convergence_estimate_ = estimate;
  return m;
}

KoenigsModel abel_parabolic(const GeneratorSpec& g, const IntegratorConfig& cfg, int n_max) {
  DwClassification dw = boundary::dw_point(g, cfg);
  if (dw.kind != DwKind::ParabolicAutomorphic && dw.kind != DwKind::ParabolicNonautomorphic)
    throw Error(ErrorCode::NotParabolic, std::string("generator is of kind ") +
                                             boundary::dw_kind_name(dw.kind));
  if (n_max < 8 || n_max > 100000)
    throw Error(ErrorCode::InvalidParameter, "n_max must be in 8..100000");

  KoenigsModel m;
  m.kind_ = ModelKind::Abel;
  m.base_ = g;
  m.cfg_ = tightened(cfg);
  m.tau_ = dw.tau;
  m.beta_ = 0.0;
  m.n_used_ = ((n_max + 7) / 8) * 8;

  // Calibration: check the O(1/n) contraction of the dyadic Cauchy
  // differences and freeze the accelerated-step estimate.
  double estimate = 0.0;
  Complex b1 = flow::map_at(g, 0.0, 1.0, m.cfg_);
  for (Complex z : {Complex(0.3, 0.0), Complex(-0.25, 0.2), Complex(0.0, 0.45)}) {
    AbelRhs rhs{g.f};
    auto guard = [](const detail::State<3>& y) {
      return std::abs(y[0]) < 1.0 && std::abs(y[0] + y[1]) < 1.0 && std::abs(y[0] + y[2]) < 1.0;
    };
    detail::State<3> y{Complex(0.0), z, b1};
    std::array<double, 3> abs_w{m.cfg_.abs_tol, 1e-30, 1e-30};
    double n = m.n_used_;
    std::vector<double> times{n / 8, n / 4, n / 2, n};
    std::vector<Complex> sigma;
    integrate_grid<3>(rhs, guard, y, times, m.cfg_, abs_w,
                      [&](double, const detail::State<3>& s) { sigma.push_back(s[1] / s[2]); });
    double d2 = std::abs(sigma[2] - sigma[1]);
    double d3 = std::abs(sigma[3] - sigma[2]);
    double scale = 1.0 + std::abs(sigma[3]);
    if (d3 > 0.8 * d2 && d3 > 1e-8 * scale)
      throw Error(ErrorCode::SlowConvergence,
                  "Abel iterates are not contracting at n_used = " + std::to_string(m.n_used_) +
                      " (last Cauchy difference " + std::to_string(d3) + ")");
    Complex r2 = 2.0 * sigma[2] - sigma[1];
    Complex r3 = 2.0 * sigma[3] - sigma[2];
    estimate = std::max(estimate, std::abs(r3 - r2) + 1e-11 * scale);
  }
  m.convergence_estimate_ = estimate;
  return m;
}

IntertwineResult intertwine_constant(const KoenigsModel& model, const GeneratorSpec& G, double s,
                                     const IntegratorConfig& cfg) {
  if (model.kind() != ModelKind::Abel)
    throw Error(ErrorCode::InvalidParameter, "intertwine constant requires an Abel model");
  if (!(s >= 0.0)) throw Error(ErrorCode::DomainError, "time must be nonnegative");

  DwClassification dwg = boundary::dw_point(G, cfg);
  if (std::abs(dwg.tau - model.tau()) > 1e-6)
    throw Error(ErrorCode::InvalidParameter,
                "generators do not share a Denjoy-Wolff point");

  const auto grid = grids::ring_pair(20, 0.3, 0.55);
  std::vector<Complex> values;
  values.reserve(grid.size());
  Complex sum = 0.0;
  for (Complex z : grid) {
    Complex w = flow::map_at(G, z, s, cfg);
    Complex lam = model.eval(w) - model.eval(z);
    values.push_back(lam);
    sum += lam;
  }
  IntertwineResult out;
  out.grid_size = static_cast<int>(values.size());
  out.lambda = sum / static_cast<double>(values.size());
  for (Complex v : values) out.spread = std::max(out.spread, std::abs(v - out.lambda));
  if (out.spread > 1e-3 * (1.0 + std::abs(out.lambda)))
    throw Error(ErrorCode::Inconsistent,
                "sigma o G - sigma is not constant over the grid (spread " +
                    std::to_string(out.spread) + ")");
  return out;
}

}  // namespace semiflow::koenigs
