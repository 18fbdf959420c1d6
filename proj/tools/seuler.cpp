// Command-line driver for the stochastic Euler experiments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seuler/euler_drift.hpp"
#include "seuler/harness.hpp"
#include "seuler/smoothing.hpp"
#include "seuler/stats.hpp"

using namespace seuler;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out;
  std::vector<std::string> set;
};

ExperimentConfig effective_config(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  for (const auto& kv : c.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + kv);
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (c.seed) cfg.seed = *c.seed;
  if (c.threads) cfg.threads = *c.threads;
  if (!c.out.empty()) cfg.out = c.out;
  cfg.validate();
  fs::create_directories(cfg.out);
  return cfg;
}

json constants(const ExperimentConfig& cfg, double ctilde) {
  if (!(ctilde > 0.0)) return json::object();  // experiment does not involve the drift
  json j = {{"ctilde", ctilde}};
  if (const auto nc = noise_for(cfg, ctilde); nc && nc->derived())
    j.update({{"G", *nc->G}, {"K", *nc->K}, {"L", *nc->L}});
  return j;
}

int finish(const ExperimentConfig& cfg, double ctilde, const std::vector<Report>& reports,
           json extra = json::object()) {
  json header = {{"config", cfg.to_json()}, {"constants", constants(cfg, ctilde)}};
  for (auto& [k, v] : extra.items()) {
    if (k == "constants")
      header["constants"].update(v);
    else
      header[k] = v;
  }
  const std::string path = (fs::path(cfg.out) / "report.json").string();
  write_report(path, reports, header);
  bool all = true;
  for (const auto& r : reports) {
    for (const auto& a : r.assertions())
      std::printf("%s  %s: %s%s\n", a.passed ? "pass" : "FAIL", r.experiment().c_str(), a.name.c_str(),
                  a.detail.empty() ? "" : (" (" + a.detail + ")").c_str());
    all = all && r.passed();
  }
  std::printf("report written to %s\n", path.c_str());
  return all ? 0 : 2;
}

int cmd_simulate(const Common& c) {
  const ExperimentConfig cfg = effective_config(c);
  const double ct = resolve_ctilde(cfg);
  const ModelBundle b = build_bundle(cfg, cfg.n, ct);
  IntegratorConfig ic;
  ic.scheme = cfg.scheme;
  ic.stop_threshold = cfg.M_stop;
  ic.thin = cfg.thin;
  const Trajectory tr = integrate(*b.model, b.lyap, b.x0, sample_path(cfg.seed, cfg.T, cfg.steps()), ic);

  std::ofstream out(fs::path(cfg.out) / "trajectory.jsonl");
  out << std::setprecision(17);
  for (const auto& d : tr.diagnostics)
    out << json{{"t", d.t}, {"e_m1", d.e_m1}, {"e0", d.e0}, {"e1", d.e1}, {"V", d.V},
                {"g", d.g}, {"f", d.f}, {"LV", d.genV}}
               .dump()
        << '\n';

  Report r("simulate");
  r.measured() = {{"stopped", tr.stopped}, {"stop_reason", tr.stop_reason},
                  {"sup_e1", tr.sup_e1},   {"sup_V", tr.sup_V},
                  {"substeps", tr.substeps}};
  if (tr.stopped) r.measured()["stop_time"] = tr.stop_time;
  r.check("no numerical failure", !tr.stopped || tr.stop_reason == "threshold", tr.stop_reason);
  return finish(cfg, ct, {r});
}

int cmd_ensemble(const Common& c) {
  const ExperimentConfig cfg = effective_config(c);
  const double ct = resolve_ctilde(cfg);
  const std::vector<int> n_list = cfg.n_list.empty() ? std::vector<int>{cfg.n} : cfg.n_list;
  const fs::path dir(cfg.out);

  if (cfg.experiment == "stats") {
    const EnsembleStats st = run_ensemble(cfg, ct);
    write_ensemble_csv((dir / "ensemble.csv").string(), st);
    Report r("ensemble");
    r.measured() = st.to_json();
    r.check("no numerical failures", st.numerical_failures == 0, std::to_string(st.numerical_failures));
    return finish(cfg, ct, {r});
  }
  if (cfg.experiment == "markov") {
    const BoundReport b = measure_generator_bound(cfg, ct, cfg.samples, derive_seed(cfg.seed, {0x5A}));
    return finish(cfg, ct, {lyapunov_report(b, "lyapunov"), markov_bound_experiment(cfg, ct, b.c_lyap)},
                  {{"constants", {{"c_lyap", b.c_lyap}}}});
  }
  if (cfg.experiment == "blowup") {
    ExperimentConfig off = cfg, on = cfg;
    off.noise_on = false;
    on.noise_on = true;
    Report r = blowup_comparison(off, on, ct);
    // The contrast run is recorded, not asserted.
    ExperimentConfig linear = on;
    linear.beta = 0.0;
    r.note("linear noise blow-up fraction", std::to_string(run_ensemble(linear, ct).blowup_fraction));
    return finish(cfg, ct, {r});
  }
  if (cfg.experiment == "holder") {
    const std::vector<std::uint64_t> seeds{cfg.seed, cfg.seed + 1, cfg.seed + 2};
    return finish(cfg, ct, {holder_tail_experiment(cfg, ct, n_list, cfg.alpha, seeds)});
  }
  if (cfg.experiment == "galerkin") return finish(cfg, ct, {galerkin_consistency(cfg, ct, n_list)});
  throw ConfigError("unknown ensemble experiment '" + cfg.experiment +
                    "' (stats | markov | blowup | holder | galerkin)");
}

int cmd_lyapunov_scan(const Common& c) {
  const ExperimentConfig cfg = effective_config(c);
  const double ct = resolve_ctilde(cfg);
  const BoundReport b = measure_generator_bound(cfg, ct, cfg.samples, derive_seed(cfg.seed, {0x1A}));
  std::ofstream csv(fs::path(cfg.out) / "lyapunov.csv");
  csv << std::setprecision(17) << "n,c_lyap\n";
  for (std::size_t i = 0; i < b.levels.size(); ++i) csv << b.levels[i] << ',' << b.c_lyap_per_level[i] << '\n';
  return finish(cfg, ct, {lyapunov_report(b, "lyapunov")}, {{"constants", {{"c_lyap", b.c_lyap}}}});
}

int cmd_calibrate(const Common& c) {
  ExperimentConfig cfg = effective_config(c);
  cfg.ctilde = 0.0;
  const double ct = resolve_ctilde(cfg);
  ExperimentConfig calibrated = cfg;
  calibrated.ctilde = ct;
  const fs::path file = fs::path(cfg.out) / "calibrated.cfg";
  std::ofstream(file) << calibrated.to_text();
  Report r("calibrate");
  r.measured() = {{"ctilde", ct}, {"samples", cfg.calibration_samples}, {"file", file.string()}};
  r.check("C~ finite and positive", std::isfinite(ct) && ct > 0.0);
  return finish(calibrated, ct, {r});
}

int cmd_smoothing(const Common& c) {
  const ExperimentConfig cfg = effective_config(c);
  Report r("smoothing");
  TimeSeries phi(1.0, 4000, 1);
  for (std::size_t i = 0; i < phi.points(); ++i) phi.at(i)[0] = std::sin(6.283185307179586 * phi.time(i));
  const auto contraction = contraction_check(phi, 0.05);
  r.check("L2 contraction", contraction.contraction_ok);
  r.check("pointwise rho^{-1/2} bound", contraction.pointwise_ok);
  const std::vector<double> rhos{1e-1, 1e-2, 1e-3};
  const auto curve = convergence_check(phi, rhos);
  r.check("error decreasing as rho -> 0", curve.strictly_decreasing);

  StochIntDemoConfig dc;
  dc.paths = cfg.ensemble;
  dc.seed = cfg.seed;
  const auto demo = stochint_convergence_demo(dc);
  std::ofstream csv(fs::path(cfg.out) / "stochint.csv");
  csv << std::setprecision(17) << "level,rho,median_sup_distance,q25,q75\n";
  for (const auto& l : demo.levels)
    csv << l.level << ',' << dc.rho << ',' << l.median << ',' << l.q25 << ',' << l.q75 << '\n';
  r.check("median sup-distance decreasing across levels", demo.median_decreasing);
  r.measured() = {{"convergence_errors", curve.errors}, {"rhos", rhos}};
  return finish(cfg, 0.0, {r});
}

int cmd_uniqueness(const Common& c) {
  const ExperimentConfig cfg = effective_config(c);
  const double ct = resolve_ctilde(cfg);
  const std::vector<std::uint64_t> seeds{cfg.seed, cfg.seed + 1, cfg.seed + 2};
  return finish(cfg, ct, {uniqueness_experiment(cfg, ct, seeds, 3)});
}

int cmd_audit(const Common& c) {
  const ExperimentConfig cfg = effective_config(c);
  const double ct = resolve_ctilde(cfg);
  return finish(cfg, ct, {audit_assumptions(cfg, ct, cfg.radii, cfg.samples),
                          assumption_c_audit(cfg, ct, cfg.samples)});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Galerkin-truncated stochastic Euler experiments"};
  app.require_subcommand(1);
  Common common;
  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const Common&);
  };
  const Sub subs[] = {
      {"simulate", "integrate one trajectory, write trajectory.jsonl", cmd_simulate},
      {"ensemble", "Monte Carlo ensemble; `experiment` selects stats | markov | blowup | holder | galerkin",
       cmd_ensemble},
      {"lyapunov-scan", "sample the Lyapunov generator by region and measure c_lyap", cmd_lyapunov_scan},
      {"calibrate", "estimate C~ and write calibrated.cfg", cmd_calibrate},
      {"smoothing-test", "smoothing operator checks and the stochastic-integral demo", cmd_smoothing},
      {"uniqueness", "replay, dt-refinement distances and the GBM strong order", cmd_uniqueness},
      {"audit", "empirical k(R), h(R) and the noise-domination condition", cmd_audit},
  };
  int (*chosen)(const Common&) = nullptr;
  for (const auto& s : subs) {
    auto* sc = app.add_subcommand(s.name, s.help);
    sc->add_option("--config", common.config, "key = value config file")->check(CLI::ExistingFile);
    sc->add_option("--seed", common.seed, "master seed");
    sc->add_option("--threads", common.threads, "worker threads")->check(CLI::PositiveNumber);
    sc->add_option("--out", common.out, "output directory");
    sc->add_option("--set", common.set, "override a config key (key=value), repeatable");
    sc->callback([&chosen, run = s.run] { chosen = run; });
  }
  CLI11_PARSE(app, argc, argv);
  try {
    return chosen(common);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
