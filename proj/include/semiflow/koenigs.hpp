#pragma once

#include <array>
#include <complex>
#include <optional>

#include "semiflow/boundary.hpp"
#include "semiflow/flow.hpp"

namespace semiflow::koenigs {

using Complex = std::complex<double>;

enum class ModelKind { InteriorSchroeder, BoundarySchroeder, Abel };

const char* model_kind_name(ModelKind kind);

// An intertwining function represented by its iteration recipe:
//   InteriorSchroeder: kappa(z) = lim (F_n(z) - tau) / mu^n,
//                      kappa(tau) = 0, kappa'(tau) = 1, kappa(F_t) = mu^t kappa
//   BoundarySchroeder: h(z) = lim (1 - conj(tau) F_n(z)) / (1 - conj(tau) F_n(0)),
//                      h(0) = 1, h(F_t) = mu^t h
//   Abel:              sigma_n(z) = (F_n(z) - F_n(0)) / (F_{n+1}(0) - F_n(0)),
//                      sigma(0) = 0, sigma(F_t) = sigma + t
// eval() reruns the recipe to n_used at the requested point (no interpolation
// tables); it is pure and safe to call concurrently.
class KoenigsModel {
 public:
  ModelKind kind() const { return kind_; }
  const std::optional<Complex>& multiplier() const { return mu_; }
  const flow::GeneratorSpec& base_map() const { return base_; }
  Complex tau() const { return tau_; }
  int n_used() const { return n_used_; }
  double convergence_estimate() const { return convergence_estimate_; }

  // Accelerated value (known-ratio elimination for the Schroeder kinds, one
  // Richardson step in 1/n for Abel).
  Complex eval(Complex z) const;
  // Raw iterate value at n_used, before acceleration.
  Complex eval_raw(Complex z) const;

 private:
  friend KoenigsModel schroeder_interior(const flow::GeneratorSpec&, const flow::IntegratorConfig&);
  friend KoenigsModel schroeder_hyperbolic(const flow::GeneratorSpec&, const flow::IntegratorConfig&);
  friend KoenigsModel abel_parabolic(const flow::GeneratorSpec&, const flow::IntegratorConfig&, int);

  struct Pair {
    Complex accelerated;
    Complex raw;
  };
  Pair run(Complex z) const;

  ModelKind kind_ = ModelKind::InteriorSchroeder;
  std::optional<Complex> mu_;
  flow::GeneratorSpec base_;
  Complex tau_{};
  Complex beta_{};
  std::array<Complex, 4> jet_{};  // generator jet at tau (rotated for boundary kinds)
  int jet_order_ = 1;             // how many derivative coefficients are usable
  int n_used_ = 0;
  double convergence_estimate_ = 0.0;
  flow::IntegratorConfig cfg_;
};

// Interior Schroeder model for a dilation-type generator (0 < |mu| < 1 with
// mu = F_1'(tau)). Throws NotDilation or SlowConvergence (|mu| > 0.999).
KoenigsModel schroeder_interior(const flow::GeneratorSpec& g,
                                const flow::IntegratorConfig& cfg = {});

// Boundary Schroeder model for a hyperbolic generator; tau is rotated to 1
// internally. Throws NotHyperbolic or SlowConvergence.
KoenigsModel schroeder_hyperbolic(const flow::GeneratorSpec& g,
                                  const flow::IntegratorConfig& cfg = {});

// Abel model for a parabolic generator (either subtype). Convergence is
// O(1/n); eval applies one Richardson step. Throws NotParabolic or
// SlowConvergence.
KoenigsModel abel_parabolic(const flow::GeneratorSpec& g, const flow::IntegratorConfig& cfg = {},
                            int n_max = 10000);

struct IntertwineResult {
  Complex lambda{};
  double spread = 0.0;
  int grid_size = 0;
};

// lambda(s) = mean over a 20-point grid of sigma(G_s(z)) - sigma(z) for an
// Abel model. Raises Inconsistent when the grid spread exceeds
// 1e-3 * (1 + |lambda|), i.e. sigma o G - sigma is not constant.
IntertwineResult intertwine_constant(const KoenigsModel& model, const flow::GeneratorSpec& G,
                                     double s, const flow::IntegratorConfig& cfg = {});

}  // namespace semiflow::koenigs
