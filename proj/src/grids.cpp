#include "semiflow/grids.hpp"

#include <cmath>
#include <numbers>

namespace semiflow::grids {

std::vector<Complex> ring(int n, double r) {
  std::vector<Complex> pts;
  pts.reserve(n);
  for (int k = 0; k < n; ++k) {
    double th = 2.0 * std::numbers::pi * k / n;
    pts.emplace_back(r * std::cos(th), r * std::sin(th));
  }
  return pts;
}

std::vector<Complex> ring_pair(int n_total, double r1, double r2) {
  int n1 = n_total / 2;
  std::vector<Complex> pts = ring(n1, r1);
  std::vector<Complex> outer = ring(n_total - n1, r2);
  pts.insert(pts.end(), outer.begin(), outer.end());
  return pts;
}

}  // namespace semiflow::grids
