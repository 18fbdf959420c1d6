#pragma once

// Time stepping for the Galerkin SDE driven by a scalar Brownian motion.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "seuler/lyapunov.hpp"
#include "seuler/model.hpp"

namespace seuler {

/// Increments of a scalar Brownian path on a uniform grid of [0, T].
struct BrownianPath {
  std::uint64_t seed = 0;
  double horizon = 1.0;
  int level = 0;  // number of bridge refinements applied
  std::vector<double> increments;

  std::size_t steps() const { return increments.size(); }
  double dt() const { return horizon / static_cast<double>(increments.size()); }
  /// W at the grid points, W(0) = 0 first.
  std::vector<double> values() const;
};

BrownianPath sample_path(std::uint64_t seed, double horizon, std::size_t steps);

/// Midpoint insertion by Brownian bridge; coarse grid values are unchanged.
BrownianPath refine(const BrownianPath& path);

/// Sums consecutive groups of `factor` increments.
BrownianPath coarsen(const BrownianPath& path, std::size_t factor);

enum class Scheme { tamed, adaptive, euler_maruyama };
std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& s);

struct StepOptions {
  double stop_threshold = std::numeric_limits<double>::infinity();
  std::uint64_t bridge_seed = 0;          // adaptive sub-step bridge stream
  std::size_t max_substeps = 50'000'000;  // adaptive guard
};

struct StepOutcome {
  SpectralState state;
  bool stopped = false;
  double stop_offset = 0.0;  // time into the step at which the stop fired
  std::string reason;        // "threshold", "numerical", "substep_limit"
  std::size_t substeps = 1;
};

/// One step of size h with Brownian increment dW.
///  tamed:          x + h b/(1 + h‖b‖_{E_1}) + σ dW/(1 + h‖σ‖²_{E_1})
///  adaptive:       plain EM sub-steps of size h/(1 + ‖b‖/‖x‖ + ‖σ‖²/‖x‖²),
///                  dW split by Brownian bridge
///  euler_maruyama: x + h b + σ dW
StepOutcome step(const Model& model, const SpectralState& x, double h, double dW, Scheme scheme,
                 const StepOptions& opts = {});
StepOutcome step(const Model& model, const SpectralState& x, const Evaluation& eval, double h,
                 double dW, Scheme scheme, const StepOptions& opts = {});

struct IntegratorConfig {
  Scheme scheme = Scheme::tamed;
  double stop_threshold = 1e6;  // on ‖X‖_{E_1}
  std::size_t thin = 1;         // keep every thin-th grid point
  bool record_states = false;
  bool record_diagnostics = true;
};

struct StepDiagnostics {
  double t = 0.0;
  double e_m1 = 0.0;
  double e0 = 0.0;
  double e1 = 0.0;
  double V = 0.0;
  double g = 0.0;
  double f = 0.0;
  double genV = 0.0;
};

struct Trajectory {
  Scheme scheme = Scheme::tamed;
  std::vector<double> times;  // retained grid times (states/diagnostics share them)
  std::vector<SpectralState> states;
  std::vector<StepDiagnostics> diagnostics;
  bool stopped = false;
  double stop_time = std::numeric_limits<double>::quiet_NaN();
  std::string stop_reason;
  double sup_e1 = 0.0;
  double sup_V = 0.0;
  std::size_t substeps = 0;
  SpectralState final_state;
};

/// Advances x0 along the path until T or ‖X‖_{E_1} >= stop_threshold.
Trajectory integrate(const Model& model, const Lyapunov& lyap, const SpectralState& x0,
                     const BrownianPath& path, const IntegratorConfig& cfg);

/// max over retained pairs s < t of ‖X_t − X_s‖_{E_{-1}} / (t − s)^α.
double holder_seminorm(std::span<const double> times, std::span<const SpectralState> states,
                       const SpaceTriple& space, double alpha);
double holder_seminorm(const Trajectory& traj, const SpaceTriple& space, double alpha);

struct UniquenessReport {
  std::vector<double> dts;
  std::vector<double> distances;  // sup_t ‖X^{dt_i} − X^{dt_{i+1}}‖_{E_{-1}}
  bool replay_identical = false;
  bool strictly_decreasing = false;
};

/// Integrates on successive bridge refinements of one driver path.
UniquenessReport uniqueness_check(const Model& model, const Lyapunov& lyap,
                                  const SpectralState& x0, std::uint64_t seed, double horizon,
                                  std::size_t base_steps, int levels, Scheme scheme);

struct StrongOrderReport {
  std::vector<double> dts;
  std::vector<double> errors;  // mean ‖X_N − X(T)‖_{E_1}
  double slope = 0.0;          // least-squares log-log slope
};

/// Plain Euler–Maruyama on dX = X dW against X_0 exp(W_T − T/2).
StrongOrderReport gbm_strong_order(std::size_t paths, std::size_t fine_steps,
                                   std::span<const std::size_t> coarse_steps, double horizon,
                                   std::uint64_t seed);

double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace seuler
