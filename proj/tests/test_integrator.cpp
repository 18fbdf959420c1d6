#include <doctest.h>

#include <cmath>
#include <vector>

#include "seuler/integrator.hpp"
#include "seuler/stats.hpp"

using namespace seuler;

namespace {

SpectralState shear(const ModeSetPtr& ms, double amp) {
  SpectralState u(ms);
  u.at(ms->index_of({0, 1, 0}), 0) = 0.5 * amp;
  u.at(ms->index_of({0, -1, 0}), 0) = 0.5 * amp;
  return u;
}

struct EulerSetup {
  SpaceTriple space{2, 4};
  ModeSetPtr modes = ModeSet::make(2, 4);
  DriftConfig drift{4, 0.4};
  Lyapunov lyap{LyapunovProfile(1.0), SpaceTriple(2, 4)};
};

}  // namespace

TEST_CASE("Brownian paths") {
  const auto a = sample_path(5, 2.0, 64);
  const auto b = sample_path(5, 2.0, 64);
  CHECK(a.increments == b.increments);
  CHECK(a.steps() == 64);
  CHECK(a.dt() == 2.0 / 64);
  CHECK(sample_path(6, 2.0, 64).increments != a.increments);
  CHECK(sample_path(5, 1.0, 1).steps() == 1);
  CHECK_THROWS_AS(sample_path(1, 1.0, 0), ConfigError);
  CHECK_THROWS_AS(sample_path(1, 0.0, 4), ConfigError);

  // Var W_T over seeds.
  std::vector<double> wt;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const auto p = sample_path(s, 1.5, 4);
    wt.push_back(p.values().back());
  }
  double m2 = 0.0;
  for (double w : wt) m2 += w * w;
  CHECK(std::abs(m2 / wt.size() - 1.5) < 0.05 * 1.5);
}

TEST_CASE("bridge refinement") {
  const auto p = sample_path(9, 1.0, 32);
  const auto r = refine(p);
  CHECK(r.steps() == 64);
  CHECK(r.level == 1);
  const auto wp = p.values();
  const auto wr = r.values();
  for (std::size_t i = 0; i < wp.size(); ++i) CHECK(std::abs(wr[2 * i] - wp[i]) < 1e-14);

  const auto rr = refine(r);
  const auto back = coarsen(rr, 4);
  for (std::size_t i = 0; i < p.steps(); ++i)
    CHECK(std::abs(back.increments[i] - p.increments[i]) < 1e-14);
  CHECK_THROWS_AS(coarsen(rr, 3), ConfigError);

  // Conditional midpoint variance h/4 = T/(4N).
  std::vector<double> dev;
  const std::size_t N = 8;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const auto c = sample_path(s, 1.0, N);
    const auto f = refine(c);
    dev.push_back(f.increments[0] - 0.5 * c.increments[0]);
  }
  double m2 = 0.0;
  for (double d : dev) m2 += d * d;
  CHECK(std::abs(m2 / dev.size() - 1.0 / (4.0 * N)) < 0.05 / (4.0 * N));
}

TEST_CASE("single steps") {
  const SpaceTriple sp(2, 4);
  const auto ms = ModeSet::make(2, 3);
  Rng rng(1);
  const auto x = random_velocity(ms, rng, 1.0);

  const auto still = make_linear_noise_model(sp, 0.0);
  for (Scheme s : {Scheme::tamed, Scheme::adaptive, Scheme::euler_maruyama})
    CHECK(step(*still, x, 0.01, 0.3, s).state == x);

  // f ≡ 1: x' = x + x dW.
  const auto lin = make_linear_noise_model(sp, 1.0);
  const auto out = step(*lin, x, 0.01, 0.3, Scheme::euler_maruyama);
  CHECK(sp.norm(out.state - 1.3 * x, Level::plus_one) < 1e-15 * sp.norm(x, Level::plus_one));
  CHECK_THROWS_AS(step(*lin, x, 0.0, 0.3, Scheme::tamed), ConfigError);
}

TEST_CASE("tamed drift increment is at most one in E1") {
  EulerSetup e;
  const EulerModel model(e.space, e.drift, std::nullopt);
  Rng rng(2);
  for (int i = 0; i < 30; ++i) {
    const auto x = std::exp(10.0 * uniform01(rng)) * random_velocity(e.modes, rng, 1.0);
    for (double h : {1e-3, 0.1, 1.0}) {
      const auto out = step(model, x, h, 0.0, Scheme::tamed);
      // Cancellation in out - x costs digits relative to ‖x‖.
      CHECK(e.space.norm(out.state - x, Level::plus_one) <= 1.0 + 1e-14 * e.space.norm(x, Level::plus_one));
    }
  }
}

TEST_CASE("adaptive scheme reproduces the scalar blow-up time") {
  // ‖X‖ solves r' = r², r(0) = 1: r = 1/(1 - t).
  const SpaceTriple sp(2, 4);
  const ToyModel toy(sp, std::nullopt);
  const Lyapunov lyap(LyapunovProfile(1.0), sp);
  const auto x0 = toy_unit_state(sp);
  IntegratorConfig cfg;
  cfg.scheme = Scheme::adaptive;
  cfg.record_diagnostics = false;
  const auto tr = integrate(toy, lyap, x0, sample_path(1, 2.0, 2000), cfg);
  CHECK(tr.stopped);
  CHECK(tr.stop_reason == "threshold");
  CHECK(tr.stop_time >= 0.99);
  CHECK(tr.stop_time <= 1.01);
  CHECK(sp.norm(tr.final_state, Level::plus_one) >= 1e6);
  CHECK(tr.sup_e1 >= 1e6);
}

TEST_CASE("integration: absorbing zero, steady shear, replay, incompressibility") {
  EulerSetup e;
  const auto noise = derive_constants(1.0, 1.0, e.drift.ctilde);
  const EulerModel noisy(e.space, e.drift, noise);
  const EulerModel quiet(e.space, e.drift, std::nullopt);
  const auto path = sample_path(3, 1.0, 200);
  IntegratorConfig cfg;
  cfg.record_states = true;

  const auto zero = integrate(noisy, e.lyap, SpectralState(e.modes), path, cfg);
  for (const auto& s : zero.states) CHECK(s.is_zero());
  CHECK_FALSE(zero.stopped);

  const auto sh = shear(e.modes, 1.3);
  const auto steady = integrate(quiet, e.lyap, sh, path, cfg);
  const double n1 = e.space.norm(sh, Level::plus_one);
  for (const auto& d : steady.diagnostics) CHECK(std::abs(d.e1 - n1) < 1e-10 * n1);

  Rng rng(5);
  const auto x0 = 0.2 * random_velocity(e.modes, rng, 2.0);
  for (Scheme s : {Scheme::tamed, Scheme::adaptive}) {
    cfg.scheme = s;
    const auto a = integrate(noisy, e.lyap, x0, path, cfg);
    const auto b = integrate(noisy, e.lyap, x0, path, cfg);
    CHECK(a.states == b.states);
    CHECK(a.times == b.times);
    CHECK(a.sup_V == b.sup_V);
    for (const auto& st : a.states) CHECK(st.divergence_defect() < 1e-11);
    CHECK(a.diagnostics.size() == a.times.size());
    // Diagnostics agree with offline recomputation.
    for (std::size_t i = 0; i < a.states.size(); i += 20) {
      CHECK(a.diagnostics[i].V == e.lyap.value(a.states[i]));
      CHECK(a.diagnostics[i].e_m1 == e.space.norm(a.states[i], Level::minus_one));
      CHECK(a.diagnostics[i].genV == e.lyap.generator(noisy, a.states[i]));
    }
  }
}

TEST_CASE("thinning keeps every k-th grid point and the endpoint") {
  const SpaceTriple sp(2, 4);
  const auto lin = make_linear_noise_model(sp, 0.5);
  const Lyapunov lyap(LyapunovProfile(1.0), sp);
  IntegratorConfig cfg;
  cfg.thin = 10;
  cfg.record_states = true;
  const auto tr = integrate(*lin, lyap, toy_unit_state(sp), sample_path(1, 1.0, 100), cfg);
  CHECK(tr.times.size() == 11);
  CHECK(tr.times.back() == 1.0);
  CHECK(tr.times[3] == doctest::Approx(0.3));
}

TEST_CASE("Hölder seminorm") {
  const SpaceTriple sp(2, 4);
  const auto ms = ModeSet::make(2, 3);
  Rng rng(4);
  const auto v = random_state(ms, rng, 1.0);
  std::vector<double> t;
  std::vector<SpectralState> constant, ramp;
  for (int i = 0; i <= 50; ++i) {
    t.push_back(i / 50.0);
    constant.push_back(v);
    ramp.push_back((i / 50.0) * v);
  }
  CHECK(holder_seminorm(t, constant, sp, 0.4) == 0.0);
  CHECK(holder_seminorm(t, ramp, sp, 0.4) ==
        doctest::Approx(sp.norm(v, Level::minus_one)).epsilon(1e-12));
  CHECK(holder_seminorm(std::span(t).first(1), std::span(ramp).first(1), sp, 0.4) == 0.0);
  CHECK_THROWS_AS(holder_seminorm(t, ramp, sp, 0.5), ConfigError);

  const auto lin = make_linear_noise_model(sp, 1.0);
  const Lyapunov lyap(LyapunovProfile(1.0), sp);
  IntegratorConfig cfg;
  cfg.record_states = true;
  const auto tr = integrate(*lin, lyap, toy_unit_state(sp), sample_path(8, 1.0, 100), cfg);
  const double lo = holder_seminorm(tr, sp, 0.30);
  const double hi = holder_seminorm(tr, sp, 0.45);
  CHECK(lo <= hi);
}

TEST_CASE("uniqueness shadow and strong order") {
  EulerSetup e;
  const auto noise = derive_constants(1.0, 1.0, e.drift.ctilde);
  const EulerModel model(e.space, e.drift, noise);
  Rng rng(7);
  auto x0 = random_velocity(e.modes, rng, 3.0);
  x0 *= 1.0 / e.space.norm(x0, Level::plus_one);
  int decreasing = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto u = uniqueness_check(model, e.lyap, x0, seed, 0.5, 50, 3, Scheme::tamed);
    CHECK(u.replay_identical);
    CHECK(u.distances.size() == 2);
    decreasing += u.strictly_decreasing;
  }
  CHECK(decreasing >= 2);
  CHECK_THROWS_AS(uniqueness_check(model, e.lyap, x0, 1, 0.5, 50, 1, Scheme::tamed), ConfigError);

  const std::vector<std::size_t> coarse{16, 32, 64, 128};
  const auto so = gbm_strong_order(400, 1024, coarse, 1.0, 11);
  CHECK(so.slope >= 0.35);
  CHECK(so.slope <= 0.65);
  for (std::size_t i = 1; i < so.errors.size(); ++i) CHECK(so.errors[i] < so.errors[i - 1]);
}
