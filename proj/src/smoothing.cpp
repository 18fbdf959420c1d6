#include "seuler/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "seuler/stats.hpp"

namespace seuler {

TimeSeries::TimeSeries(double horizon, std::size_t dim, std::vector<double> values)
    : T_(horizon), dim_(dim), v_(std::move(values)) {
  if (!(T_ > 0.0)) throw ConfigError("time series horizon must be positive");
  if (dim_ == 0 || v_.size() % dim_ != 0 || v_.size() / dim_ < 2)
    throw ConfigError("time series needs at least two grid points of dimension dim");
  for (double x : v_)
    if (!std::isfinite(x)) throw ConfigError("time series values must be finite");
}

TimeSeries::TimeSeries(double horizon, std::size_t steps, std::size_t dim)
    : TimeSeries(horizon, dim, std::vector<double>((steps + 1) * dim, 0.0)) {}

TimeSeries& TimeSeries::operator+=(const TimeSeries& o) {
  if (o.v_.size() != v_.size() || o.dim_ != dim_) throw ConfigError("time series shape mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

TimeSeries& TimeSeries::operator-=(const TimeSeries& o) {
  if (o.v_.size() != v_.size() || o.dim_ != dim_) throw ConfigError("time series shape mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

TimeSeries& TimeSeries::operator*=(double a) {
  for (double& x : v_) x *= a;
  return *this;
}

namespace {

// Exact weights of (1/ρ) ∫_0^h e^{-(h-τ)/ρ} [Φ_i (1 - τ/h) + Φ_{i+1} τ/h] dτ.
struct IntervalWeights {
  double decay;  // e^{-h/ρ}
  double left;   // weight of Φ_i
  double right;  // weight of Φ_{i+1}
};

IntervalWeights interval_weights(double h, double rho) {
  if (!(rho > 0.0)) throw ConfigError("rho must be positive");
  const double x = h / rho;
  const double one_minus_e = -std::expm1(-x);
  double right;
  if (x < 1e-3) {
    right = x * (0.5 - x * (1.0 / 6.0 - x * (1.0 / 24.0 - x * (1.0 / 120.0 - x / 720.0))));
  } else {
    right = 1.0 - one_minus_e / x;
  }
  return {std::exp(-x), one_minus_e - right, right};
}

}  // namespace

TimeSeries apply_R_rho(const TimeSeries& series, double rho) {
  const auto w = interval_weights(series.dt(), rho);
  TimeSeries out(series.horizon(), series.steps(), series.dim());
  for (std::size_t i = 0; i + 1 < series.points(); ++i) {
    auto prev = out.at(i);
    auto next = out.at(i + 1);
    const auto a = series.at(i);
    const auto b = series.at(i + 1);
    for (std::size_t c = 0; c < series.dim(); ++c)
      next[c] = w.decay * prev[c] + w.left * a[c] + w.right * b[c];
  }
  return out;
}

TimeSeries apply_R_rho_direct(const TimeSeries& series, double rho) {
  const auto w = interval_weights(series.dt(), rho);
  const double h = series.dt();
  TimeSeries out(series.horizon(), series.steps(), series.dim());
  for (std::size_t i = 1; i < series.points(); ++i) {
    auto dst = out.at(i);
    for (std::size_t j = 0; j < i; ++j) {
      // interval [t_j, t_{j+1}] decays over t_i - t_{j+1}
      const double decay = std::exp(-static_cast<double>(i - j - 1) * h / rho);
      const auto a = series.at(j);
      const auto b = series.at(j + 1);
      for (std::size_t c = 0; c < series.dim(); ++c)
        dst[c] += decay * (w.left * a[c] + w.right * b[c]);
    }
  }
  return out;
}

double l2_norm(const TimeSeries& series) {
  const double h = series.dt();
  std::vector<double> cells(series.steps());
  for (std::size_t i = 0; i < series.steps(); ++i) {
    const auto a = series.at(i);
    const auto b = series.at(i + 1);
    double s = 0.0;
    for (std::size_t c = 0; c < series.dim(); ++c) s += a[c] * a[c] + a[c] * b[c] + b[c] * b[c];
    cells[i] = h * s / 3.0;
  }
  return std::sqrt(pairwise_sum(cells));
}

double pointwise_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

ContractionReport contraction_check(const TimeSeries& series, double rho) {
  const TimeSeries r = apply_R_rho(series, rho);
  ContractionReport rep;
  rep.lhs = l2_norm(r);
  rep.rhs = l2_norm(series);
  rep.contraction_ok = rep.lhs <= rep.rhs * (1.0 + 1e-10);
  const double bound = rep.rhs / std::sqrt(rho);
  for (std::size_t i = 0; i < r.points(); ++i) {
    const double v = pointwise_norm(r.at(i));
    if (bound > 0.0) rep.pointwise_ratio = std::max(rep.pointwise_ratio, v / bound);
    else if (v > 0.0) rep.pointwise_ratio = std::numeric_limits<double>::infinity();
  }
  rep.pointwise_ok = rep.pointwise_ratio <= 1.0;
  return rep;
}

ConvergenceCurve convergence_check(const TimeSeries& series, std::span<const double> rho_list) {
  if (rho_list.size() < 3) throw ConfigError("convergence check needs at least three rho values");
  for (std::size_t i = 1; i < rho_list.size(); ++i)
    if (!(rho_list[i] < rho_list[i - 1])) throw ConfigError("rho list must be strictly decreasing");
  ConvergenceCurve curve;
  for (double rho : rho_list) {
    curve.rhos.push_back(rho);
    curve.errors.push_back(l2_norm(apply_R_rho(series, rho) - series));
  }
  curve.non_increasing = curve.strictly_decreasing = true;
  for (std::size_t i = 1; i < curve.errors.size(); ++i) {
    if (curve.errors[i] > curve.errors[i - 1] + 1e-12) curve.non_increasing = false;
    if (!(curve.errors[i] < curve.errors[i - 1])) curve.strictly_decreasing = false;
  }
  return curve;
}

IbpResult ibp_identity_check(const TimeSeries& G, const BrownianPath& W, double rho) {
  if (G.dim() != 1) throw ConfigError("integration-by-parts check takes a scalar integrand");
  if (G.steps() != W.steps()) throw ConfigError("integrand and path must share the grid");
  const TimeSeries R = apply_R_rho(G, rho);
  const auto w = W.values();
  const double h = G.dt();
  std::vector<double> ito(G.steps()), smooth(G.steps()), raw(G.steps());
  for (std::size_t i = 0; i < G.steps(); ++i) {
    ito[i] = R.at(i)[0] * W.increments[i];
    smooth[i] = R.at(i)[0] * w[i] * h;
    raw[i] = G.at(i)[0] * w[i] * h;
  }
  IbpResult res;
  res.lhs = pairwise_sum(ito);
  res.rhs = R.at(G.steps())[0] * w.back() + (pairwise_sum(smooth) - pairwise_sum(raw)) / rho;
  res.residual = std::abs(res.lhs - res.rhs);
  return res;
}

namespace {

constexpr std::size_t demo_dim = 2;

TimeSeries demo_integrand(const StochIntDemoConfig& cfg, int k, double delta) {
  TimeSeries g(cfg.horizon, cfg.fine_steps, demo_dim);
  const double w = 2.0 * std::numbers::pi * (k + 1);
  for (std::size_t i = 0; i < g.points(); ++i) {
    const double t = g.time(i);
    auto v = g.at(i);
    v[0] = std::sin(w * t) + delta * std::cos(5.0 * t + k);
    v[1] = 0.5 * std::cos(w * t) + delta * std::sin(3.0 * t + k);
  }
  return g;
}

// W values on the fine grid, piecewise-linear between coarse nodes.
std::vector<double> interpolate_driver(const std::vector<double>& w, std::size_t coarse) {
  const std::size_t fine = w.size() - 1;
  const std::size_t m = fine / coarse;
  std::vector<double> out(w.size());
  for (std::size_t c = 0; c < coarse; ++c) {
    const double a = w[c * m];
    const double b = w[(c + 1) * m];
    for (std::size_t j = 0; j < m; ++j)
      out[c * m + j] = a + (b - a) * static_cast<double>(j) / static_cast<double>(m);
  }
  out[fine] = w[fine];
  return out;
}

// Running Itô sums Σ_k Σ_{j<i} G_k(t_j) ΔW_k(t_j).
std::vector<double> running_integral(const std::vector<TimeSeries>& G,
                                     const std::vector<std::vector<double>>& W) {
  const std::size_t N = G.front().steps();
  std::vector<double> acc((N + 1) * demo_dim, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t c = 0; c < demo_dim; ++c) {
      double s = acc[i * demo_dim + c];
      for (std::size_t k = 0; k < G.size(); ++k) s += G[k].at(i)[c] * (W[k][i + 1] - W[k][i]);
      acc[(i + 1) * demo_dim + c] = s;
    }
  }
  return acc;
}

// Σ_k [R_ρG_k(t) W_k(t) + (1/ρ)∫_0^t R_ρG_k W ds − (1/ρ)∫_0^t G_k W ds].
std::vector<double> smoothed_by_parts(const std::vector<TimeSeries>& G,
                                      const std::vector<std::vector<double>>& W, double rho) {
  const std::size_t N = G.front().steps();
  const double h = G.front().dt();
  std::vector<double> out((N + 1) * demo_dim, 0.0);
  for (std::size_t k = 0; k < G.size(); ++k) {
    const TimeSeries R = apply_R_rho(G[k], rho);
    double integral[demo_dim] = {0.0, 0.0};
    for (std::size_t i = 0; i <= N; ++i) {
      for (std::size_t c = 0; c < demo_dim; ++c) {
        out[i * demo_dim + c] += R.at(i)[c] * W[k][i] + integral[c] / rho;
        if (i < N) integral[c] += (R.at(i)[c] - G[k].at(i)[c]) * W[k][i] * h;
      }
    }
  }
  return out;
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); i += demo_dim) {
    double s = 0.0;
    for (std::size_t c = 0; c < demo_dim; ++c) s += (a[i + c] - b[i + c]) * (a[i + c] - b[i + c]);
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

}  // namespace

StochIntDemoReport stochint_convergence_demo(const StochIntDemoConfig& cfg) {
  if (cfg.drivers < 1) throw ConfigError("demo needs at least one driver");
  if (cfg.levels < 3) throw ConfigError("demo needs at least three levels");
  const std::size_t top = cfg.coarse_base << (cfg.levels - 1);
  if (cfg.fine_steps % top != 0) throw ConfigError("fine grid must refine every coarse grid");

  StochIntDemoReport rep;
  rep.config = cfg;
  std::vector<TimeSeries> G;
  for (int k = 0; k < cfg.drivers; ++k) G.push_back(demo_integrand(cfg, k, 0.0));

  std::vector<std::vector<double>> dist(cfg.levels), dist_smooth(cfg.levels);
  for (std::size_t p = 0; p < cfg.paths; ++p) {
    std::vector<std::vector<double>> W;
    for (int k = 0; k < cfg.drivers; ++k)
      W.push_back(sample_path(derive_seed(cfg.seed, {p, static_cast<std::uint64_t>(k)}), cfg.horizon,
                              cfg.fine_steps).values());
    const auto limit = running_integral(G, W);
    const auto limit_smooth = smoothed_by_parts(G, W, cfg.rho);
    for (int l = 0; l < cfg.levels; ++l) {
      const double delta = cfg.perturb_integrand ? std::ldexp(1.0, -l) : 0.0;
      std::vector<TimeSeries> Gn;
      for (int k = 0; k < cfg.drivers; ++k) Gn.push_back(demo_integrand(cfg, k, delta));
      std::vector<std::vector<double>> Wn;
      for (int k = 0; k < cfg.drivers; ++k)
        Wn.push_back(cfg.coarsen_driver ? interpolate_driver(W[k], cfg.coarse_base << l) : W[k]);
      dist[l].push_back(sup_distance(running_integral(Gn, Wn), limit));
      dist_smooth[l].push_back(sup_distance(smoothed_by_parts(Gn, Wn, cfg.rho), limit_smooth));
    }
  }
  for (int l = 0; l < cfg.levels; ++l) {
    StochIntLevel lv;
    lv.level = l;
    lv.delta = cfg.perturb_integrand ? std::ldexp(1.0, -l) : 0.0;
    lv.median = quantile(dist[l], 0.5);
    lv.q25 = quantile(dist[l], 0.25);
    lv.q75 = quantile(dist[l], 0.75);
    lv.median_smoothed = quantile(dist_smooth[l], 0.5);
    rep.levels.push_back(lv);
  }
  rep.median_decreasing = true;
  for (std::size_t l = 1; l < rep.levels.size(); ++l)
    if (!(rep.levels[l].median < rep.levels[l - 1].median)) rep.median_decreasing = false;
  return rep;
}

}  // namespace seuler
