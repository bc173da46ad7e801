#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include "semiflow/error.hpp"

namespace semiflow::detail {

using Complex = std::complex<double>;

template <std::size_t N>
using State = std::array<Complex, N>;

struct StepStats {
  long accepted = 0;
  long rejected = 0;
};

struct StepControl {
  double rel_tol = 1e-10;
  double h_min = 1e-12;
  long max_steps = 1000000;
};

// Dormand-Prince 5(4) embedded pair, autonomous systems, FSAL.
//
// RHS:   void(const State<N>&, State<N>& dydt); may throw Error. A throw
//        while probing a trial step rejects the step; a throw at the current
//        state propagates.
// Guard: bool(const State<N>&); false rejects the step. Exhausting h_min on
//        guard rejections raises NotAGenerator (the trajectory is leaving the
//        admissible region), on error-control rejections StepUnderflow.
template <std::size_t N, class RHS, class Guard>
void dopri5_integrate(RHS&& rhs, Guard&& guard, State<N>& y, double t_begin, double t_end,
                      const StepControl& ctl, const std::array<double, N>& abs_w,
                      double& h_live, StepStats& stats) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  if (!(t_end >= t_begin)) throw Error(ErrorCode::InvalidParameter, "integration backwards in time");
  const double t_eps = 1e-14 * (1.0 + std::abs(t_end));
  if (t_end - t_begin <= t_eps) return;

  auto finite = [](const State<N>& s) {
    for (const Complex& c : s)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
  };

  State<N> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
  rhs(y, k1);  // current state must be evaluable
  if (!finite(k1)) throw Error(ErrorCode::Overflow, "non-finite derivative at initial state");

  double t = t_begin;
  double err_prev = 1.0;
  long steps = 0;
  bool guard_reject_last = false;

  while (t_end - t > t_eps) {
    if (++steps > ctl.max_steps) throw Error(ErrorCode::MaxStepsExceeded, "step budget exhausted");
    double h = std::min(h_live, t_end - t);

    bool stage_failed = false;
    double err = 0.0;
    try {
      for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a21 * k1[i]);
      rhs(ytmp, k2);
      for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      rhs(ytmp, k3);
      for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      rhs(ytmp, k4);
      for (std::size_t i = 0; i < N; ++i)
        ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      rhs(ytmp, k5);
      for (std::size_t i = 0; i < N; ++i)
        ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      rhs(ytmp, k6);
      for (std::size_t i = 0; i < N; ++i)
        ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      rhs(ynew, k7);

      for (std::size_t i = 0; i < N; ++i) {
        double ei = std::abs(h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                  e7 * k7[i]));
        double sc = abs_w[i] + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        if (ei == 0.0) continue;
        err = std::max(err, sc > 0.0 ? ei / sc : std::numeric_limits<double>::infinity());
      }
      if (!finite(ynew) || !finite(k7) || !std::isfinite(err)) stage_failed = true;
    } catch (const Error&) {
      stage_failed = true;
    }

    if (stage_failed) {
      ++stats.rejected;
      guard_reject_last = true;
      h_live = h * 0.5;
    } else if (!guard(ynew)) {
      ++stats.rejected;
      guard_reject_last = true;
      h_live = h * 0.5;
    } else if (err > 1.0) {
      ++stats.rejected;
      guard_reject_last = false;
      h_live = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5);
    } else {
      ++stats.accepted;
      t += h;
      y = ynew;
      k1 = k7;
      double fac = err == 0.0 ? 5.0 : 0.9 * std::pow(err, -0.2) * std::pow(err_prev, 0.08);
      h_live = h * std::clamp(fac, 0.2, 5.0);
      err_prev = std::max(err, 1e-10);
      continue;
    }

    if (h_live < ctl.h_min) {
      if (guard_reject_last)
        throw Error(ErrorCode::NotAGenerator,
                    "trajectory cannot be continued inside the disk (step fell below h_min)");
      throw Error(ErrorCode::StepUnderflow, "step size fell below h_min");
    }
  }
}

}  // namespace semiflow::detail
