#pragma once

// Causal exponential smoothing (R_ρ Φ)(t) = (1/ρ) ∫_0^t e^{-(t-s)/ρ} Φ(s) ds on
// piecewise-linear vector time series, and the stochastic-integral checks built on it.

#include <cstdint>
#include <span>
#include <vector>

#include "seuler/integrator.hpp"

namespace seuler {

/// Values of a vector-valued function on the uniform grid t_i = i T / N,
/// i = 0..N, stored point-major; interpolated piecewise-linearly.
class TimeSeries {
 public:
  TimeSeries(double horizon, std::size_t dim, std::vector<double> values);
  TimeSeries(double horizon, std::size_t steps, std::size_t dim);

  double horizon() const { return T_; }
  std::size_t dim() const { return dim_; }
  std::size_t steps() const { return v_.size() / dim_ - 1; }
  std::size_t points() const { return v_.size() / dim_; }
  double dt() const { return T_ / static_cast<double>(steps()); }
  double time(std::size_t i) const { return static_cast<double>(i) * dt(); }

  std::span<double> at(std::size_t i) { return {v_.data() + i * dim_, dim_}; }
  std::span<const double> at(std::size_t i) const { return {v_.data() + i * dim_, dim_}; }
  std::span<const double> data() const { return v_; }

  TimeSeries& operator+=(const TimeSeries& o);
  TimeSeries& operator-=(const TimeSeries& o);
  TimeSeries& operator*=(double a);
  friend TimeSeries operator+(TimeSeries a, const TimeSeries& b) { return a += b; }
  friend TimeSeries operator-(TimeSeries a, const TimeSeries& b) { return a -= b; }

 private:
  double T_;
  std::size_t dim_;
  std::vector<double> v_;
};

/// Exact kernel integral of the interpolant, via R(t_{i+1}) = e^{-h/ρ} R(t_i) + local term.
TimeSeries apply_R_rho(const TimeSeries& series, double rho);

/// Same quantity as an explicit O(N²) sum of decayed per-interval integrals.
TimeSeries apply_R_rho_direct(const TimeSeries& series, double rho);

/// Exact L²([0,T]) norm of the piecewise-linear interpolant.
double l2_norm(const TimeSeries& series);

double pointwise_norm(std::span<const double> v);

struct ContractionReport {
  double lhs = 0.0;  // ‖R_ρ Φ‖_{L²}
  double rhs = 0.0;  // ‖Φ‖_{L²}
  double pointwise_ratio = 0.0;  // max_i ‖R_ρΦ(t_i)‖ / (ρ^{-1/2} ‖Φ‖_{L²})
  bool contraction_ok = false;   // lhs <= rhs (1 + 1e-10)
  bool pointwise_ok = false;     // pointwise_ratio <= 1
};

ContractionReport contraction_check(const TimeSeries& series, double rho);

struct ConvergenceCurve {
  std::vector<double> rhos;
  std::vector<double> errors;  // ‖R_ρΦ − Φ‖_{L²}
  bool non_increasing = false;
  bool strictly_decreasing = false;
};

/// rho_list must be strictly decreasing with at least three entries.
ConvergenceCurve convergence_check(const TimeSeries& series, std::span<const double> rho_list);

struct IbpResult {
  double lhs = 0.0;  // Σ R_ρG(t_i) ΔW_i
  double rhs = 0.0;  // R_ρG(T) W(T) + (1/ρ) Σ R_ρG W h − (1/ρ) Σ G W h
  double residual = 0.0;
};

/// Scalar-valued G on the same grid as the Brownian path (G.dim() must be 1).
IbpResult ibp_identity_check(const TimeSeries& G, const BrownianPath& W, double rho);

struct StochIntDemoConfig {
  int drivers = 3;            // K independent Brownian motions
  int levels = 4;
  std::size_t paths = 200;
  std::size_t fine_steps = 4096;
  std::size_t coarse_base = 8;  // level l interpolates W on coarse_base·2^l intervals
  double horizon = 1.0;
  double rho = 0.05;            // smoothing parameter for the smoothed-integral column
  bool perturb_integrand = true;  // Gⁿ = G + 2^{-l} P
  bool coarsen_driver = true;     // Wⁿ = piecewise-linear interpolant of W
  std::uint64_t seed = 1;
};

struct StochIntLevel {
  int level = 0;
  double delta = 0.0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double median_smoothed = 0.0;  // sup_t ‖∫R_ρGⁿ dWⁿ − ∫R_ρG dW‖ through integration by parts
};

struct StochIntDemoReport {
  StochIntDemoConfig config;
  std::vector<StochIntLevel> levels;
  bool median_decreasing = false;
};

/// sup_t ‖Σ_k ∫ Gⁿ_k dWⁿ_k − Σ_k ∫ G_k dW_k‖ per level over an ensemble, H = R².
StochIntDemoReport stochint_convergence_demo(const StochIntDemoConfig& cfg);

}  // namespace seuler
