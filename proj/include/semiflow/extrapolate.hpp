#pragma once

#include <complex>
#include <span>
#include <vector>

namespace semiflow::numeric {

using Complex = std::complex<double>;

struct Extrapolation {
  Complex value{};
  double error_estimate = 0.0;
  int levels_used = 0;
};

// Limit of samples A_k whose error follows sum_j C_j * q^(k*j) (geometric
// step refinement with ratio q, e.g. radii 1 - h*2^-k give q = 1/2).
// Builds the elimination tableau and returns the entry with the smallest
// self-consistent error estimate.
Extrapolation richardson_limit(std::span<const Complex> samples, double q = 0.5,
                               int max_levels = 4);

// Tail test for sequences whose successive differences refuse to shrink
// (logarithmic or genuine divergence). `floor` is the noise level below
// which differences count as converged.
bool tail_divergent(std::span<const Complex> samples, int tail = 8, double floor = 0.0);

// Polynomial extrapolation of (x_i, y_i) to x = 0 (Neville scheme).
Complex neville_to_zero(std::span<const double> xs, std::span<const Complex> ys);

// Least-squares fit y ~ a + b*x; returns {a, b}.
std::pair<double, double> fit_affine(std::span<const double> xs, std::span<const double> ys);

}  // namespace semiflow::numeric
