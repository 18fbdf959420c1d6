#pragma once

// Monte Carlo ensembles and the experiments built on them. Every experiment
// returns a Report whose assertions are also written to report.json.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "seuler/config.hpp"
#include "seuler/integrator.hpp"
#include "seuler/lyapunov.hpp"
#include "seuler/model.hpp"

namespace seuler {

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

class Report {
 public:
  explicit Report(std::string experiment) : experiment_(std::move(experiment)) {}

  bool check(const std::string& name, bool passed, const std::string& detail = {});
  /// Recorded for context only; does not affect passed().
  void note(const std::string& name, const std::string& detail);

  bool passed() const;
  const std::string& experiment() const { return experiment_; }
  const std::vector<Assertion>& assertions() const { return assertions_; }
  nlohmann::json& measured() { return measured_; }
  const nlohmann::json& measured() const { return measured_; }
  nlohmann::json to_json() const;

 private:
  std::string experiment_;
  std::vector<Assertion> assertions_;
  std::vector<Assertion> notes_;
  nlohmann::json measured_ = nlohmann::json::object();
};

/// Model, Lyapunov function, initial state and direction sampler for one truncation.
struct ModelBundle {
  SpaceTriple space;
  ModeSetPtr modes;
  std::unique_ptr<Model> model;
  Lyapunov lyap;
  SpectralState x0;
  std::function<SpectralState(Rng&)> direction;
};

/// The config's C~, calibrating over n_list ∪ {n} when it is not set.
double resolve_ctilde(const ExperimentConfig& cfg);
std::optional<NoiseConfig> noise_for(const ExperimentConfig& cfg, double ctilde);
LyapunovProfile profile_for(const ExperimentConfig& cfg);
/// Initial condition on `modes`; random fields are drawn on the largest
/// truncation of the scan and projected, so every level sees Π_n X_0.
SpectralState initial_condition(const ExperimentConfig& cfg, const ModeSetPtr& modes,
                                const SpaceTriple& space);
ModelBundle build_bundle(const ExperimentConfig& cfg, int n, double ctilde);

struct PathSummary {
  double sup_V = 0.0;
  double sup_e1 = 0.0;
  double holder = 0.0;
  bool blowup = false;     // crossed M_stop
  bool numerical = false;  // non-finite state or sub-step guard
  double stop_time = 0.0;
};

struct EnsembleStats {
  std::size_t count = 0;
  std::size_t blowups = 0;
  std::size_t numerical_failures = 0;
  double blowup_fraction = 0.0;
  std::vector<PathSummary> paths;  // index order
  std::vector<double> sup_V_quantiles;   // at ensemble_quantile_levels
  std::vector<double> sup_e1_quantiles;
  double mean_sup_e1 = 0.0;
  double mean_stop_time = 0.0;  // over blow-ups
  double wall_seconds = 0.0;

  nlohmann::json to_json() const;  // aggregate only, wall time excluded from equality
  bool same_statistics(const EnsembleStats& other) const;
};

inline const std::vector<double> ensemble_quantile_levels{0.05, 0.25, 0.5, 0.75, 0.95};

struct EnsembleOptions {
  bool holder = false;  // record states and compute the Hölder seminorm at cfg.alpha
  int n = 0;            // truncation override (0: cfg.n)
  std::uint64_t seed_offset = 0;
};

/// cfg.ensemble independent paths with seeds derive_seed(cfg.seed, {index}).
EnsembleStats run_ensemble(const ExperimentConfig& cfg, double ctilde,
                           const EnsembleOptions& opts = {});

/// Writes one CSV row per path.
void write_ensemble_csv(const std::string& path, const EnsembleStats& stats);

/// Lyapunov generator scan over n_list ∪ {n} (one level for the toy model).
BoundReport measure_generator_bound(const ExperimentConfig& cfg, double ctilde,
                                    std::size_t per_region, std::uint64_t seed);
Report lyapunov_report(const BoundReport& bound, const std::string& name);

/// P̂(sup_t V ≥ M) against V(x₀) e^{c T} / M for M = multiple · V(x₀).
Report markov_bound_experiment(const ExperimentConfig& cfg, double ctilde, double c_lyap);

/// Blow-up fractions for a (noise-off, noise-on) pair of otherwise identical configs.
Report blowup_comparison(const ExperimentConfig& noise_off, const ExperimentConfig& noise_on,
                         double ctilde);

/// 95th percentile of the Hölder seminorm per truncation, per master seed.
Report holder_tail_experiment(const ExperimentConfig& cfg, double ctilde,
                              std::span<const int> n_list, double alpha,
                              std::span<const std::uint64_t> seeds);

/// sup_t ‖X^{n_i} − X^{n_{i+1}}‖_{E_0} on a common driver, median over paths.
Report galerkin_consistency(const ExperimentConfig& cfg, double ctilde,
                            std::span<const int> n_list);

/// Empirical monotonicity constant k(R) of b and Lipschitz constant h(R) of σ
/// on E_0 balls.
Report audit_assumptions(const ExperimentConfig& cfg, double ctilde, std::span<const double> radii,
                         std::size_t samples);

/// f² ≥ 2g − K on {g > G} for random fields of the config's truncation.
Report assumption_c_audit(const ExperimentConfig& cfg, double ctilde, std::size_t samples);

/// Uniqueness shadow: replay, dt-refinement distances per seed, GBM strong order.
Report uniqueness_experiment(const ExperimentConfig& cfg, double ctilde,
                             std::span<const std::uint64_t> seeds, int levels);

void write_report(const std::string& path, const std::vector<Report>& reports,
                  const nlohmann::json& header);

}  // namespace seuler
