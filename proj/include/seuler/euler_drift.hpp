#pragma once

// Incompressible Euler nonlinearity on a cube Fourier truncation:
// b(u) = -P[(u·∇)u], computed as an exact truncated convolution.

#include <cstdint>
#include <span>
#include <vector>

#include "seuler/spaces.hpp"

namespace seuler {

struct DriftConfig {
  int oversampling = 4;  // grid has (2 q n)^d points
  double ctilde = 1.0;

  void validate() const {
    if (oversampling < 2) throw ConfigError("grid oversampling must be >= 2");
    if (!(ctilde > 0.0)) throw ConfigError("C~ must be positive");
  }
};

/// Mode-wise projector (I - k kᵀ/|k|²) onto divergence-free fields.
SpectralState leray_project(const SpectralState& v);

/// (u·∇)u restricted to the retained modes, no projection. Pointwise products
/// on a padded grid, which is exact for the truncated convolution.
SpectralState advection(const SpectralState& u);

/// Same quantity summed over the triad table; O(modes²), kept as a reference.
SpectralState advection_triads(const SpectralState& u);

/// b(u) = -P[(u·∇)u].
SpectralState nonlinearity(const SpectralState& u);

/// Grid values of the field and its first partials.
struct GridExtrema {
  double sup_velocity = 0.0;  // max_x |u(x)|_2
  double sup_gradient = 0.0;  // max_x max_{i,j} |∂_i u_j(x)|
};

/// Extrema of u and ∇u over the uniform (2 q n)^d grid on [0, 2π)^d. u must be
/// a real field (Hermitian coefficients).
GridExtrema grid_extrema(const SpectralState& u, int oversampling);

/// W^{1,∞} surrogate: max(sup|u|, max_{i,j} sup|∂_i u_j|) on the oversampled grid.
double winf_norm(const SpectralState& u, int oversampling);

double g_of(const SpectralState& u, const DriftConfig& cfg);

/// ⟨b(u), u⟩ in E_1.
double drift_pairing(const SpectralState& u, const SpaceTriple& space);

/// Random divergence-free real field with a random spectral slope and, for a
/// third of the draws, a random sparse support. Used for calibration,
/// validation and Lyapunov sampling.
SpectralState sample_velocity(const ModeSetPtr& modes, Rng& rng);

/// Divergence-free real field with coefficient scale |k|^{-decay}.
SpectralState random_velocity(const ModeSetPtr& modes, Rng& rng, double decay);

/// Ratio |⟨b(u),u⟩_{E_1}| / (winf(u) ‖u‖²_{E_1}); NaN for the zero field.
double drift_ratio(const SpectralState& u, const SpaceTriple& space, int oversampling);

struct Calibration {
  double ctilde = 0.0;
  double max_ratio = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;
};

constexpr double ctilde_safety_factor = 1.5;

/// C~ = 1.5 · max ratio over the given samples. Zero samples are skipped;
/// throws when nothing usable remains.
Calibration calibrate_ctilde(std::span<const SpectralState> samples, const SpaceTriple& space,
                             int oversampling);

/// Draws sample_count fields (>= 100) round-robin over the mode sets.
Calibration calibrate_ctilde(std::span<const ModeSetPtr> mode_sets, const SpaceTriple& space,
                             int oversampling, std::size_t sample_count, std::uint64_t seed);

}  // namespace seuler
