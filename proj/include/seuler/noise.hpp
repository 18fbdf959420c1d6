#pragma once

// Radial superlinear diffusion σ(u) = f(u) u with
// f(u) = c (1 + ‖u‖²_{W^{1,∞}})^{β/2}, and the constants (G, K, L) that make
// f² ≥ 2g − K hold on {g > G} and ‖σ(u)‖ ≤ L‖u‖ on {g ≤ G}.

#include <optional>
#include <span>
#include <vector>

#include "seuler/euler_drift.hpp"
#include "seuler/spaces.hpp"

namespace seuler {

struct NoiseConfig {
  double c_noise = 1.0;
  double beta = 1.0;
  double ctilde = 1.0;
  // Present only after derive_constants.
  std::optional<double> G;
  std::optional<double> K;
  std::optional<double> L;

  bool derived() const { return G.has_value(); }
};

/// Derives (G, K, L) with K = 0 and the minimal admissible G.
/// β < 1/2 and the borderline case c² <= 2C~ at β = 1/2 are rejected.
NoiseConfig derive_constants(double beta, double c_noise, double ctilde);

/// f as a function of the W^{1,∞} value (or of any scalar size measure).
double noise_factor(const NoiseConfig& cfg, double size);

double f_of(const SpectralState& u, const NoiseConfig& cfg, int oversampling);

/// σ(u) = f(u) u.
SpectralState sigma(const SpectralState& u, const NoiseConfig& cfg, int oversampling);

struct AssumptionCViolation {
  std::size_t index;
  double g;
  double f;
};

struct AssumptionCReport {
  std::size_t checked = 0;
  std::size_t skipped = 0;  // samples with g <= G
  std::vector<AssumptionCViolation> violations;
  bool passed() const { return violations.empty(); }
};

/// Checks f² ≥ 2g − K on every sample with g > G. Needs derived constants.
AssumptionCReport check_assumption_c(std::span<const SpectralState> samples,
                                     const NoiseConfig& cfg, int oversampling);

/// Same check on precomputed W^{1,∞} values (g = C~ w).
AssumptionCReport check_assumption_c(std::span<const double> winf_values, const NoiseConfig& cfg);

}  // namespace seuler
