#include "seuler/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace seuler {

std::vector<double> BrownianPath::values() const {
  std::vector<double> w(increments.size() + 1, 0.0);
  for (std::size_t i = 0; i < increments.size(); ++i) w[i + 1] = w[i] + increments[i];
  return w;
}

BrownianPath sample_path(std::uint64_t seed, double horizon, std::size_t steps) {
  if (steps < 1) throw ConfigError("Brownian path needs at least one step");
  if (!(horizon > 0.0)) throw ConfigError("Brownian path horizon must be positive");
  BrownianPath p{seed, horizon, 0, {}};
  Rng rng(derive_seed(seed, {0xB0, 0}));
  const double sd = std::sqrt(horizon / static_cast<double>(steps));
  p.increments.resize(steps);
  for (auto& dw : p.increments) dw = sd * standard_normal(rng);
  return p;
}

BrownianPath refine(const BrownianPath& path) {
  BrownianPath out{path.seed, path.horizon, path.level + 1, {}};
  Rng rng(derive_seed(path.seed, {0xB0, static_cast<std::uint64_t>(path.level + 1)}));
  // Midpoint of an interval of length h given its endpoints: mean at the
  // chord, variance h/4.
  const double sd = std::sqrt(path.dt() / 4.0);
  out.increments.reserve(2 * path.steps());
  for (double dw : path.increments) {
    const double z = sd * standard_normal(rng);
    out.increments.push_back(0.5 * dw + z);
    out.increments.push_back(0.5 * dw - z);
  }
  return out;
}

BrownianPath coarsen(const BrownianPath& path, std::size_t factor) {
  if (factor == 0 || path.steps() % factor != 0)
    throw ConfigError("coarsening factor must divide the step count");
  BrownianPath out{path.seed, path.horizon, path.level, {}};
  for (std::size_t i = 0; i < path.steps(); i += factor) {
    double s = 0.0;
    for (std::size_t j = 0; j < factor; ++j) s += path.increments[i + j];
    out.increments.push_back(s);
  }
  return out;
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::tamed: return "tamed";
    case Scheme::adaptive: return "adaptive";
    case Scheme::euler_maruyama: return "euler_maruyama";
  }
  return "?";
}

Scheme parse_scheme(const std::string& s) {
  if (s == "tamed") return Scheme::tamed;
  if (s == "adaptive") return Scheme::adaptive;
  if (s == "euler_maruyama" || s == "em") return Scheme::euler_maruyama;
  throw ConfigError("unknown scheme '" + s + "'");
}

namespace {

void check_outcome(StepOutcome& out, const SpaceTriple& space, double offset,
                   const StepOptions& opts) {
  if (!out.state.is_finite()) {
    out.stopped = true;
    out.reason = "numerical";
    out.stop_offset = offset;
    return;
  }
  if (space.norm(out.state, Level::plus_one) >= opts.stop_threshold) {
    out.stopped = true;
    out.reason = "threshold";
    out.stop_offset = offset;
  }
}

StepOutcome adaptive_step(const Model& model, const SpectralState& x0, const Evaluation& eval0,
                          double h, double dW, const StepOptions& opts) {
  const auto& space = model.space();
  Rng rng(opts.bridge_seed);
  StepOutcome out{x0, false, 0.0, {}, 0};
  double tau = 0.0;
  double w_done = 0.0;
  bool first = true;
  while (tau < h) {
    if (out.substeps >= opts.max_substeps) {
      out.stopped = true;
      out.reason = "substep_limit";
      out.stop_offset = tau;
      return out;
    }
    const Evaluation e = first ? eval0 : model.evaluate(out.state);
    first = false;
    const double xn = space.norm(out.state, Level::plus_one);
    const double bn = space.norm(e.drift, Level::plus_one);
    const double rate = xn > 0.0 ? bn / xn + e.f * e.f : bn;
    double h_eff = h / (1.0 + rate);
    const double remaining = h - tau;
    if (h_eff >= remaining * (1.0 - 1e-12)) h_eff = remaining;

    double dw;
    if (h_eff == remaining) {
      dw = dW - w_done;
    } else {
      const double mean = w_done + (h_eff / remaining) * (dW - w_done);
      const double var = h_eff * (remaining - h_eff) / remaining;
      const double w_new = mean + std::sqrt(var) * standard_normal(rng);
      dw = w_new - w_done;
      w_done = w_new;
    }
    SpectralState next = out.state;
    next.axpy(h_eff, e.drift);
    next.axpy(e.f * dw, out.state);
    out.state = std::move(next);
    tau = (h_eff == remaining) ? h : tau + h_eff;
    ++out.substeps;
    check_outcome(out, space, tau, opts);
    if (out.stopped) return out;
  }
  model.constrain(out.state);
  return out;
}

}  // namespace

StepOutcome step(const Model& model, const SpectralState& x, const Evaluation& eval, double h,
                 double dW, Scheme scheme, const StepOptions& opts) {
  if (!(h > 0.0)) throw ConfigError("step size must be positive");
  if (scheme == Scheme::adaptive) return adaptive_step(model, x, eval, h, dW, opts);

  const auto& space = model.space();
  StepOutcome out{x, false, 0.0, {}, 1};
  double drift_scale = h;
  double noise_scale = eval.f * dW;
  if (scheme == Scheme::tamed) {
    const double bn = space.norm(eval.drift, Level::plus_one);
    const double sn = std::abs(eval.f) * space.norm(x, Level::plus_one);
    drift_scale = h / (1.0 + h * bn);
    noise_scale /= (1.0 + h * sn * sn);
  }
  out.state.axpy(drift_scale, eval.drift);
  out.state.axpy(noise_scale, x);
  model.constrain(out.state);
  check_outcome(out, space, h, opts);
  return out;
}

StepOutcome step(const Model& model, const SpectralState& x, double h, double dW, Scheme scheme,
                 const StepOptions& opts) {
  return step(model, x, model.evaluate(x), h, dW, scheme, opts);
}

Trajectory integrate(const Model& model, const Lyapunov& lyap, const SpectralState& x0,
                     const BrownianPath& path, const IntegratorConfig& cfg) {
  if (cfg.thin == 0) throw ConfigError("thinning factor must be >= 1");
  const auto& space = model.space();
  Trajectory traj;
  traj.scheme = cfg.scheme;
  const double h = path.dt();
  const std::size_t N = path.steps();

  auto record = [&](double t, const SpectralState& x, const Evaluation* eval) {
    traj.times.push_back(t);
    if (cfg.record_states) traj.states.push_back(x);
    if (cfg.record_diagnostics) {
      StepDiagnostics d;
      d.t = t;
      d.e_m1 = space.norm(x, Level::minus_one);
      d.e0 = space.norm(x, Level::zero);
      d.e1 = space.norm(x, Level::plus_one);
      d.V = lyap.profile().phi(d.e1);
      if (eval) {
        d.g = eval->g;
        d.f = eval->f;
        d.genV = lyap.generator(x, *eval);
      } else {
        d.g = d.f = d.genV = std::numeric_limits<double>::quiet_NaN();
      }
      traj.diagnostics.push_back(d);
    }
  };
  auto track_sup = [&](const SpectralState& x) {
    const double e1 = space.norm(x, Level::plus_one);
    traj.sup_e1 = std::max(traj.sup_e1, e1);
    traj.sup_V = std::max(traj.sup_V, lyap.profile().phi(e1));
  };

  SpectralState x = x0;
  StepOptions opts;
  opts.stop_threshold = cfg.stop_threshold;
  for (std::size_t i = 0; i < N; ++i) {
    const double t = static_cast<double>(i) * h;
    const Evaluation eval = model.evaluate(x);
    if (i % cfg.thin == 0) record(t, x, &eval);
    track_sup(x);
    opts.bridge_seed = derive_seed(path.seed, {0xADA, static_cast<std::uint64_t>(path.level), i});
    StepOutcome out = step(model, x, eval, h, path.increments[i], cfg.scheme, opts);
    traj.substeps += out.substeps;
    x = std::move(out.state);
    if (out.stopped) {
      traj.stopped = true;
      traj.stop_reason = out.reason;
      traj.stop_time = t + out.stop_offset;
      break;
    }
  }
  const double t_end = traj.stopped ? traj.stop_time : path.horizon;
  if (x.is_finite()) {
    const Evaluation eval = model.evaluate(x);
    record(t_end, x, &eval);
    track_sup(x);
  } else {
    record(t_end, x, nullptr);
    traj.sup_e1 = traj.sup_V = std::numeric_limits<double>::infinity();
  }
  traj.final_state = std::move(x);
  return traj;
}

double holder_seminorm(std::span<const double> times, std::span<const SpectralState> states,
                       const SpaceTriple& space, double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw ConfigError("Hölder exponent must lie in (0, 1/2)");
  if (times.size() != states.size()) throw ConfigError("times and states differ in length");
  double worst = 0.0;
  for (std::size_t j = 1; j < states.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const double gap = times[j] - times[i];
      if (!(gap > 0.0)) continue;
      const double d = space.norm(states[j] - states[i], Level::minus_one);
      worst = std::max(worst, d / std::pow(gap, alpha));
    }
  }
  return worst;
}

double holder_seminorm(const Trajectory& traj, const SpaceTriple& space, double alpha) {
  if (traj.states.size() != traj.times.size())
    throw ConfigError("Hölder seminorm needs a trajectory recorded with states");
  return holder_seminorm(traj.times, traj.states, space, alpha);
}

UniquenessReport uniqueness_check(const Model& model, const Lyapunov& lyap,
                                  const SpectralState& x0, std::uint64_t seed, double horizon,
                                  std::size_t base_steps, int levels, Scheme scheme) {
  if (levels < 2) throw ConfigError("uniqueness check needs at least two dt levels");
  IntegratorConfig cfg;
  cfg.scheme = scheme;
  cfg.record_states = true;
  cfg.record_diagnostics = false;

  UniquenessReport rep;
  BrownianPath path = sample_path(seed, horizon, base_steps);
  std::vector<Trajectory> runs;
  for (int l = 0; l < levels; ++l) {
    if (l > 0) path = refine(path);
    rep.dts.push_back(path.dt());
    runs.push_back(integrate(model, lyap, x0, path, cfg));
    if (l == 0) {
      const Trajectory again = integrate(model, lyap, x0, path, cfg);
      rep.replay_identical = again.states == runs.front().states && again.times == runs.front().times;
    }
  }
  for (int l = 0; l + 1 < levels; ++l) {
    const auto& coarse = runs[l];
    const auto& fine = runs[l + 1];
    const std::size_t m = std::min(coarse.states.size(), (fine.states.size() + 1) / 2);
    double sup = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sup = std::max(sup, model.space().norm(coarse.states[i] - fine.states[2 * i], Level::minus_one));
    }
    rep.distances.push_back(sup);
  }
  rep.strictly_decreasing = true;
  for (std::size_t i = 1; i < rep.distances.size(); ++i)
    if (!(rep.distances[i] < rep.distances[i - 1])) rep.strictly_decreasing = false;
  return rep;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

StrongOrderReport gbm_strong_order(std::size_t paths, std::size_t fine_steps,
                                   std::span<const std::size_t> coarse_steps, double horizon,
                                   std::uint64_t seed) {
  const SpaceTriple space(2, 4);
  const auto model = make_linear_noise_model(space, 1.0);
  const Lyapunov lyap(LyapunovProfile{}, space);
  const SpectralState x0 = toy_unit_state(space);

  StrongOrderReport rep;
  std::vector<double> err_sum(coarse_steps.size(), 0.0);
  IntegratorConfig cfg;
  cfg.scheme = Scheme::euler_maruyama;
  cfg.record_diagnostics = false;
  cfg.stop_threshold = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < paths; ++p) {
    const BrownianPath fine = sample_path(derive_seed(seed, {p}), horizon, fine_steps);
    double w_T = 0.0;
    for (double dw : fine.increments) w_T += dw;
    const SpectralState exact = std::exp(w_T - 0.5 * horizon) * x0;
    for (std::size_t l = 0; l < coarse_steps.size(); ++l) {
      const BrownianPath coarse = coarsen(fine, fine_steps / coarse_steps[l]);
      const Trajectory tr = integrate(*model, lyap, x0, coarse, cfg);
      err_sum[l] += space.norm(tr.final_state - exact, Level::plus_one);
    }
  }
  for (std::size_t l = 0; l < coarse_steps.size(); ++l) {
    rep.dts.push_back(horizon / static_cast<double>(coarse_steps[l]));
    rep.errors.push_back(err_sum[l] / static_cast<double>(paths));
  }
  rep.slope = loglog_slope(rep.dts, rep.errors);
  return rep;
}

}  // namespace seuler
