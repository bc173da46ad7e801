#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "semiflow/flow.hpp"

namespace semiflow::commute {

using Complex = std::complex<double>;

struct PairResidual {
  double t = 0.0;
  double s = 0.0;
  double residual = 0.0;
};

struct CommuteReport {
  double max_residual = 0.0;
  double argmax_t = 0.0;
  double argmax_s = 0.0;
  Complex argmax_z{};
  std::string grid_spec;
  std::vector<PairResidual> per_pair;
};

// Default sweep: 8 interior points on two circles (|z| in {0.3, 0.6}, 4
// angles) against times exercising non-integer slots.
std::vector<Complex> default_grid();
std::vector<std::pair<double, double>> default_times();

// max over ts x grid of |F_t(G_s(z)) - G_s(F_t(z))|, flows by integration.
CommuteReport commute_residual(const flow::GeneratorSpec& gF, const flow::GeneratorSpec& gG,
                               std::span<const std::pair<double, double>> ts,
                               std::span<const Complex> grid,
                               const flow::IntegratorConfig& cfg = {});

struct ProportionalityReport {
  Complex a{};          // least-squares ratio f ~ a * g
  double residual = 0;  // max |f(z) - a g(z)| over the sample
  int sample_size = 0;
};

ProportionalityReport proportionality(const flow::GeneratorSpec& gF,
                                      const flow::GeneratorSpec& gG,
                                      std::span<const Complex> sample);

// m_tau(z) = (tau - z) / (1 - conj(tau) z); involutive disk automorphism.
Complex mobius(Complex tau, Complex z);

// The elliptic automorphism z -> m_tau(e^{i phi t} m_tau(z)).
std::function<Complex(Complex)> elliptic_group(Complex tau, double phi, double t);

// The linear-fractional element z -> m_tau(e^{-a t} m_tau(z)); a self-map of
// the disk exactly when Re a >= 0.
std::function<Complex(Complex)> lft_semigroup(Complex tau, Complex a, double t);

// Generator a1/(tau - sigma_pt) * (z - tau)(z - sigma_pt) of the hyperbolic
// automorphism group fixing the two boundary points tau and sigma_pt.
flow::GeneratorSpec hyperbolic_auto_generator(Complex tau, Complex sigma_pt, double a1);

// sup over the grid of |G_t(e^{i phi} z) - e^{i phi} G_t(z)|.
double rotation_equivariance(const flow::GeneratorSpec& gG, double phi, double t,
                             std::span<const Complex> grid,
                             const flow::IntegratorConfig& cfg = {});

}  // namespace semiflow::commute
