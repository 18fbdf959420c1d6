#pragma once

// Radial Lyapunov function V(x) = φ(‖x‖_{E_1}) with φ = a on [0, R], φ = log r
// on [2R, ∞) and a quintic Hermite bridge in between (C², non-decreasing).

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seuler/model.hpp"

namespace seuler {

class LyapunovProfile {
 public:
  /// a defaults to default_plateau(R). Throws if a ∉ (0, log 2R) or the
  /// bridge fails the monotonicity grid check.
  explicit LyapunovProfile(double radius = 1.0, std::optional<double> plateau = {});

  static double default_plateau(double radius) { return 0.5 * std::log(2.0 * radius); }

  double radius() const { return R_; }
  double plateau() const { return a_; }
  /// Bridge polynomial in t = (r - R)/R, lowest degree first.
  const std::array<double, 6>& bridge() const { return c_; }

  double phi(double r) const;
  double dphi(double r) const;
  double d2phi(double r) const;

 private:
  double R_;
  double a_;
  std::array<double, 6> c_{};
};

class Lyapunov {
 public:
  Lyapunov(LyapunovProfile profile, SpaceTriple space) : profile_(profile), space_(space) {}

  const LyapunovProfile& profile() const { return profile_; }
  const SpaceTriple& space() const { return space_; }

  double value(const SpectralState& x) const;
  /// ⟨∇V(x), v⟩_{E_1}
  double gradient_pairing(const SpectralState& x, const SpectralState& v) const;
  /// ⟨v, D²V(x) v⟩_{E_1}
  double hessian_quadform(const SpectralState& x, const SpectralState& v) const;

  /// L_n V(x) = ⟨∇V, b_n⟩ + ½ ⟨σ_n, D²V σ_n⟩.
  double generator(const Model& model, const SpectralState& x) const;
  /// Same, reusing an evaluation of the model at x.
  double generator(const SpectralState& x, const Evaluation& eval) const;

 private:
  LyapunovProfile profile_;
  SpaceTriple space_;
};

enum class Region { plateau = 0, annulus = 1, far_strong = 2, far_weak = 3 };
constexpr std::array<Region, 4> all_regions{Region::plateau, Region::annulus, Region::far_strong,
                                            Region::far_weak};
std::string to_string(Region r);

struct RegionStats {
  std::size_t count = 0;
  std::size_t requested = 0;
  double max_generator = -std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;  // positive part of max L V / V
  double max_g = 0.0;
  double max_f = 0.0;
};

/// One Galerkin level of a scan: the model on truncation n and a sampler of
/// random directions on its mode set.
struct ScanLevel {
  int n = 0;
  const Model* model = nullptr;
  std::function<SpectralState(Rng&)> direction;
};

struct BoundReport {
  double c_lyap = 0.0;
  std::vector<int> levels;
  std::vector<double> c_lyap_per_level;
  std::array<RegionStats, 4> regions{};
  std::optional<double> G;
  std::optional<double> far_weak_bound;  // G + ½ C² L², C = 1
  double far_strong_tolerance = 1e-10;

  bool plateau_ok() const;
  bool far_strong_ok() const;
  bool far_weak_ok() const;
};

/// Samples `per_region` states in each region on every level and records the
/// generator. Region membership for the far field uses the model's G; without
/// derived noise constants all far-field samples count as far_weak.
BoundReport verify_bound(const Lyapunov& lyap, std::span<const ScanLevel> levels,
                         std::size_t per_region, std::uint64_t seed);

/// Draws a state in the requested region by rescaling random directions.
/// g must be positively homogeneous of degree one. Returns nullopt when no
/// direction admits the region within max_attempts.
std::optional<SpectralState> sample_in_region(const Lyapunov& lyap, const Model& model,
                                              const std::function<SpectralState(Rng&)>& direction,
                                              Region region, Rng& rng, int max_attempts = 64);

}  // namespace seuler
