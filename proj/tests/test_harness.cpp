#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "seuler/harness.hpp"

using namespace seuler;

namespace {

ExperimentConfig quiet_custom() {
  ExperimentConfig c;
  c.model = ModelKind::custom;
  c.noise_on = false;
  c.init = "unit";
  c.T = 0.5;
  c.dt = 0.01;
  c.ensemble = 20;
  return c;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  const auto c = parse_config(
      "# comment\n"
      "model = euler2d\n"
      "n = 6\n"
      "n_list = 4, 6, 8\n"
      "noise = off\n"
      "T = 0.5   # trailing comment\n"
      "dt = 0.01\n"
      "M_multiples = 2,3\n");
  CHECK(c.model == ModelKind::euler2d);
  CHECK(c.n == 6);
  CHECK(c.n_list == std::vector<int>{4, 6, 8});
  CHECK_FALSE(c.noise_on);
  CHECK(c.steps() == 50);
  CHECK(c.M_multiples == std::vector<double>{2.0, 3.0});

  CHECK_THROWS_AS(parse_config("colour = blue\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("n = 4.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("just text\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model = burgers\n"), ConfigError);

  ExperimentConfig bad;
  bad.s = 3;  // needs s > d/2 + 2 = 3
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.s = 4;
  bad.dt = 0.3;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  ExperimentConfig three;
  three.d = 3;
  three.s = 3;
  CHECK_THROWS_AS(three.validate(), ConfigError);
  three.s = 4;
  CHECK_NOTHROW(three.validate());

  // Text round trip preserves every field.
  const auto back = parse_config(c.to_text());
  CHECK(back.to_json() == c.to_json());
}

TEST_CASE("zero drift and zero noise: sup V is V(x0), no blow-ups") {
  const auto cfg = quiet_custom();
  const auto b = build_bundle(cfg, cfg.n, 1.0);
  const double V0 = b.lyap.value(b.x0);
  const auto st = run_ensemble(cfg, 1.0);
  CHECK(st.count == 20);
  CHECK(st.blowup_fraction == 0.0);
  CHECK(st.numerical_failures == 0);
  for (const auto& p : st.paths) CHECK(p.sup_V == V0);
  for (double q : st.sup_V_quantiles) CHECK(q == V0);
}

TEST_CASE("ensemble statistics do not depend on the worker count") {
  ExperimentConfig cfg;
  cfg.n = 4;
  cfg.ctilde = 0.4;
  cfg.T = 0.1;
  cfg.dt = 2e-3;
  cfg.ensemble = 24;
  cfg.init = "random";
  cfg.init_amplitude = 2.0;
  cfg.threads = 1;
  const auto a = run_ensemble(cfg, 0.4);
  cfg.threads = 3;
  const auto b = run_ensemble(cfg, 0.4);
  CHECK(a.same_statistics(b));
  cfg.seed = 2;
  CHECK_FALSE(a.same_statistics(run_ensemble(cfg, 0.4)));
  for (std::size_t i = 1; i < a.sup_V_quantiles.size(); ++i)
    CHECK(a.sup_V_quantiles[i] >= a.sup_V_quantiles[i - 1]);
}

TEST_CASE("euler2d smoke ensemble") {
  ExperimentConfig cfg;
  cfg.n = 6;
  cfg.ctilde = 0.0;
  cfg.calibration_samples = 200;
  cfg.T = 0.1;
  cfg.dt = 1e-3;
  cfg.ensemble = 100;
  const double ct = resolve_ctilde(cfg);
  CHECK(ct > 0.0);
  CHECK(std::isfinite(ct));
  const auto st = run_ensemble(cfg, ct);
  CHECK(st.count == 100);
  CHECK(st.numerical_failures == 0);
  CHECK(st.blowup_fraction >= 0.0);
  CHECK(st.blowup_fraction <= 1.0);

  const auto csv = std::filesystem::temp_directory_path() / "seuler_smoke.csv";
  write_ensemble_csv(csv.string(), st);
  std::ifstream in(csv);
  std::size_t lines = 0;
  for (std::string s; std::getline(in, s);) ++lines;
  CHECK(lines == 101);
  std::filesystem::remove(csv);
}

TEST_CASE("Markov bound is vacuous below the plateau") {
  auto cfg = quiet_custom();
  cfg.M_multiples = {0.5};
  const auto r = markov_bound_experiment(cfg, 1.0, 0.0);
  CHECK(r.passed());
  const auto& row = r.measured()["rows"][0];
  CHECK(row["p_hat"].get<double>() == 1.0);
  CHECK(row["bound"].get<double>() > 1.0);
}

TEST_CASE("Galerkin levels coincide when x0 lives in the smallest truncation") {
  auto cfg = quiet_custom();
  cfg.noise_on = true;
  cfg.c_noise = 0.8;
  const std::vector<int> n_list{2, 3, 4};
  const auto r = galerkin_consistency(cfg, 1.0, n_list);
  for (double d : r.measured()["median_distance"]) CHECK(d == 0.0);
  CHECK_FALSE(r.passed());  // 0, 0 is not strictly decreasing
  const std::vector<int> bad{4, 4};
  CHECK_THROWS_AS(galerkin_consistency(cfg, 1.0, bad), ConfigError);
}

TEST_CASE("assumption audit") {
  // β = 0: σ(x) = c x, so the Lipschitz constant is exactly c on every ball.
  ExperimentConfig cfg;
  cfg.n = 4;
  cfg.beta = 0.0;
  cfg.c_noise = 0.7;
  const std::vector<double> radii{1.0, 2.0, 4.0};
  const auto r = audit_assumptions(cfg, 0.4, radii, 200);
  CHECK(r.passed());
  const auto h = r.measured()["h"].get<std::vector<double>>();
  for (double v : h) CHECK(v == doctest::Approx(0.7).epsilon(0.1));
  const auto k = r.measured()["k"].get<std::vector<double>>();
  for (std::size_t i = 1; i < k.size(); ++i) CHECK(k[i] >= k[i - 1]);

  const std::vector<double> unsorted{2.0, 1.0};
  CHECK_THROWS_AS(audit_assumptions(cfg, 0.4, unsorted, 10), ConfigError);

  cfg.beta = 1.0;
  CHECK(assumption_c_audit(cfg, 0.4, 300).passed());
  cfg.beta = 0.0;
  CHECK(assumption_c_audit(cfg, 0.4, 300).passed());  // not applicable: recorded as a note
}

TEST_CASE("reports serialize every assertion") {
  Report r("demo");
  r.check("first", true, "ok");
  r.check("second", false);
  r.note("context", "not an assertion");
  r.measured()["x"] = 1.5;
  CHECK_FALSE(r.passed());
  const auto j = r.to_json();
  CHECK(j["experiment"] == "demo");
  CHECK(j["assertions"].size() == 2);
  CHECK(j["assertions"][1]["passed"] == false);
  CHECK(j["notes"].size() == 1);
  CHECK(j["measured"]["x"] == 1.5);

  Report ok("fine");
  ok.check("a", true);
  const auto path = std::filesystem::temp_directory_path() / "seuler_report.json";
  write_report(path.string(), {ok, r}, {{"config", quiet_custom().to_json()}});
  std::ifstream in(path);
  const auto back = nlohmann::json::parse(in);
  CHECK(back["passed"] == false);
  CHECK(back["reports"].size() == 2);
  CHECK(back["config"]["model"] == "custom");
  std::filesystem::remove(path);
}
