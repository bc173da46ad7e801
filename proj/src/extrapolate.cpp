#include "semiflow/extrapolate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semiflow/error.hpp"

namespace semiflow::numeric {

Extrapolation richardson_limit(std::span<const Complex> samples, double q, int max_levels) {
  if (samples.empty()) throw Error(ErrorCode::InvalidParameter, "no samples to extrapolate");
  std::vector<Complex> col(samples.begin(), samples.end());

  double scale = 0.0;
  for (const Complex& s : col) scale = std::max(scale, std::abs(s));
  const double floor = 1e-15 * (1.0 + scale);

  Extrapolation best;
  best.value = col.back();
  best.error_estimate = col.size() >= 2
                            ? std::abs(col[col.size() - 1] - col[col.size() - 2]) + floor
                            : std::numeric_limits<double>::infinity();
  best.levels_used = 0;

  double qj = 1.0;
  for (int level = 1; level <= max_levels && col.size() >= 2; ++level) {
    qj *= q;
    std::vector<Complex> next(col.size() - 1);
    for (std::size_t i = 0; i + 1 < col.size(); ++i)
      next[i] = (col[i + 1] - qj * col[i]) / (1.0 - qj);
    Complex candidate = next.back();
    double est = std::abs(candidate - col.back());
    if (next.size() >= 2) est = std::max(est, std::abs(candidate - next[next.size() - 2]));
    est += floor;
    if (est < best.error_estimate) {
      best.value = candidate;
      best.error_estimate = est;
      best.levels_used = level;
    }
    col = std::move(next);
  }
  return best;
}

bool tail_divergent(std::span<const Complex> samples, int tail, double floor) {
  if (samples.size() < static_cast<std::size_t>(tail + 1)) return false;
  std::vector<double> diffs;
  for (std::size_t i = samples.size() - tail - 1; i + 1 < samples.size(); ++i)
    diffs.push_back(std::abs(samples[i + 1] - samples[i]));

  double scale = 0.0;
  for (const Complex& s : samples) scale = std::max(scale, std::abs(s));
  double noise = std::max(floor, 1e-13 * (1.0 + scale));
  if (diffs.back() <= noise) return false;

  std::vector<double> ratios;
  for (std::size_t i = 0; i + 1 < diffs.size(); ++i) {
    if (diffs[i] <= noise) return false;  // already at the noise floor earlier
    ratios.push_back(diffs[i + 1] / diffs[i]);
  }
  std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
  return ratios[ratios.size() / 2] >= 0.9;
}

Complex neville_to_zero(std::span<const double> xs, std::span<const Complex> ys) {
  if (xs.size() != ys.size() || xs.empty())
    throw Error(ErrorCode::InvalidParameter, "mismatched extrapolation nodes");
  std::vector<Complex> p(ys.begin(), ys.end());
  const std::size_t n = xs.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      double denom = xs[i] - xs[i + level];
      p[i] = (0.0 - xs[i + level]) * (p[i] - p[i + 1]) / denom + p[i + 1];
    }
  }
  return p[0];
}

std::pair<double, double> fit_affine(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw Error(ErrorCode::InvalidParameter, "need at least two points for an affine fit");
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double det = n * sxx - sx * sx;
  double b = (n * sxy - sx * sy) / det;
  double a = (sy - b * sx) / n;
  return {a, b};
}

}  // namespace semiflow::numeric
