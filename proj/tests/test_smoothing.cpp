#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "seuler/smoothing.hpp"

using namespace seuler;

namespace {

TimeSeries from_function(double T, std::size_t N, std::size_t dim,
                         const std::function<double(double, std::size_t)>& f) {
  TimeSeries s(T, N, dim);
  for (std::size_t i = 0; i < s.points(); ++i)
    for (std::size_t c = 0; c < dim; ++c) s.at(i)[c] = f(s.time(i), c);
  return s;
}

double max_diff(const TimeSeries& a, const TimeSeries& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

const double two_pi = 2.0 * std::numbers::pi;

}  // namespace

TEST_CASE("constant input has the closed form kappa (1 - exp(-t/rho))") {
  const double kappa[3] = {1.0, -2.5, 0.3};
  for (double rho : {1e-3, 0.05, 1.0, 40.0}) {
    for (std::size_t N : {10, 1000}) {
      const auto phi = from_function(1.0, N, 3, [&](double, std::size_t c) { return kappa[c]; });
      const auto r = apply_R_rho(phi, rho);
      double err = 0.0;
      for (std::size_t i = 0; i < r.points(); ++i)
        for (std::size_t c = 0; c < 3; ++c)
          err = std::max(err, std::abs(r.at(i)[c] + kappa[c] * std::expm1(-r.time(i) / rho)));
      CHECK(err < 1e-12);
    }
  }
}

TEST_CASE("recursion and direct quadrature agree; zero and linearity") {
  const auto phi = from_function(2.0, 400, 2, [](double t, std::size_t c) {
    return c ? std::cos(3.0 * t) * t : std::sin(two_pi * t) + (t > 0.7);
  });
  const auto psi = from_function(2.0, 400, 2, [](double t, std::size_t c) { return c ? t * t : -t; });
  for (double rho : {1e-3, 0.1, 3.0}) {
    CHECK(max_diff(apply_R_rho(phi, rho), apply_R_rho_direct(phi, rho)) < 1e-12);
    const auto zero = apply_R_rho(TimeSeries(2.0, 400, 2), rho);
    for (double v : zero.data()) CHECK(v == 0.0);
    CHECK(max_diff(apply_R_rho(phi + psi, rho), apply_R_rho(phi, rho) + apply_R_rho(psi, rho)) < 1e-13);
  }
  CHECK_THROWS_AS(apply_R_rho(phi, 0.0), ConfigError);
}

TEST_CASE("causality") {
  auto a = from_function(1.0, 100, 1, [](double t, std::size_t) { return std::sin(5 * t); });
  auto b = a;
  for (std::size_t i = 60; i < b.points(); ++i) b.at(i)[0] += 10.0;
  const auto ra = apply_R_rho(a, 0.1);
  const auto rb = apply_R_rho(b, 0.1);
  for (std::size_t i = 0; i < 60; ++i) CHECK(ra.at(i)[0] == rb.at(i)[0]);
}

TEST_CASE("L2 norm is exact for the interpolant") {
  // Linear function t on [0, 2]: ∫ t² = 8/3, exact on any grid.
  const auto lin = from_function(2.0, 7, 1, [](double t, std::size_t) { return t; });
  CHECK(l2_norm(lin) == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("contraction and pointwise bound") {
  const auto phi = from_function(1.0, 2000, 1, [](double t, std::size_t) { return std::sin(two_pi * t); });
  const auto c = contraction_check(phi, 0.1);
  CHECK(c.lhs < c.rhs);
  CHECK(c.contraction_ok);
  CHECK(c.pointwise_ok);

  const auto one = from_function(1.0, 200, 1, [](double, std::size_t) { return 1.0; });
  double prev = 2.0;
  for (double rho : {1.0, 10.0, 1e3, 1e6}) {
    const auto r = contraction_check(one, rho);
    CHECK(r.lhs < prev);
    CHECK(r.contraction_ok);
    prev = r.lhs;
  }
  CHECK(prev < 1e-5);

  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const double rho = std::pow(10.0, -3.0 + 3.0 * uniform01(rng));
    TimeSeries s(1.0, 500, 3);
    for (std::size_t j = 0; j < s.points(); ++j)
      for (std::size_t k = 0; k < 3; ++k) s.at(j)[k] = standard_normal(rng);
    const auto r = contraction_check(s, rho);
    CHECK(r.contraction_ok);
    CHECK(r.pointwise_ok);
  }
}

TEST_CASE("convergence to the identity") {
  const std::vector<double> rhos{1e-1, 1e-2, 1e-3};
  const auto phi = from_function(1.0, 4000, 1, [](double t, std::size_t) { return std::sin(two_pi * t); });
  const auto curve = convergence_check(phi, rhos);
  CHECK(curve.strictly_decreasing);
  CHECK(curve.non_increasing);

  const auto zero = convergence_check(TimeSeries(1.0, 100, 1), rhos);
  for (double e : zero.errors) CHECK(e == 0.0);

  CHECK_THROWS_AS(convergence_check(phi, std::vector<double>{1e-1, 1e-2}), ConfigError);
  CHECK_THROWS_AS(convergence_check(phi, std::vector<double>{1e-2, 1e-1, 1e-3}), ConfigError);

  // Step function: the interpolant smears the jump over one cell, so against
  // the true step the error stops improving at ρ << Δt, and that floor
  // (squared) halves when the grid is refined.
  auto step = [](std::size_t N) {
    return from_function(1.0, N, 1, [](double t, std::size_t) { return t >= 0.5 - 1e-12 ? 1.0 : 0.0; });
  };
  auto error_vs_step = [](const TimeSeries& r) {
    double acc = 0.0;
    const int sub = 200;
    for (std::size_t i = 0; i < r.steps(); ++i)
      for (int j = 0; j < sub; ++j) {
        const double u = (j + 0.5) / sub;
        const double t = r.time(i) + u * r.dt();
        const double v = (1 - u) * r.at(i)[0] + u * r.at(i + 1)[0];
        const double e = v - (t >= 0.5 ? 1.0 : 0.0);
        acc += e * e * r.dt() / sub;
      }
    return std::sqrt(acc);
  };
  const auto coarse = step(1000);
  const auto fine = step(2000);
  CHECK(convergence_check(coarse, rhos).strictly_decreasing);
  std::vector<double> floor_coarse, floor_fine;
  for (double rho : {1e-1, 1e-2, 1e-3, 1e-6, 1e-7}) {
    floor_coarse.push_back(error_vs_step(apply_R_rho(coarse, rho)));
    floor_fine.push_back(error_vs_step(apply_R_rho(fine, rho)));
  }
  CHECK(floor_coarse[1] < floor_coarse[0]);
  CHECK(floor_coarse[2] < floor_coarse[1]);
  // Below Δt nothing changes: the floor is the ramp's own distance sqrt(Δt/3).
  CHECK(floor_coarse[4] == doctest::Approx(floor_coarse[3]).epsilon(1e-3));
  CHECK(floor_coarse[4] == doctest::Approx(std::sqrt(1e-3 / 3.0)).epsilon(1e-3));
  const double ratio = std::pow(floor_fine.back() / floor_coarse.back(), 2);
  CHECK(ratio == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("integration by parts without Itô correction") {
  const double rho = 0.1;
  // Trivial cases.
  const auto path = sample_path(4, 1.0, 256);
  const auto zero = ibp_identity_check(TimeSeries(1.0, 256, 1), path, rho);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  BrownianPath frozen = path;
  std::fill(frozen.increments.begin(), frozen.increments.end(), 0.0);
  const auto one = from_function(1.0, 256, 1, [](double, std::size_t) { return 1.7; });
  const auto fr = ibp_identity_check(one, frozen, rho);
  CHECK(fr.lhs == 0.0);
  CHECK(fr.rhs == 0.0);

  // O(Δt) residual: mean over paths halves under one bridge refinement.
  double coarse = 0.0, fine = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto p = sample_path(derive_seed(77, {s}), 1.0, 256);
    const auto q = refine(p);
    coarse += ibp_identity_check(one, p, rho).residual;
    fine += ibp_identity_check(from_function(1.0, 512, 1, [](double, std::size_t) { return 1.7; }), q, rho)
                .residual;
  }
  const double ratio = fine / coarse;
  CHECK(ratio >= 0.35);
  CHECK(ratio <= 0.65);

  CHECK_THROWS_AS(ibp_identity_check(TimeSeries(1.0, 128, 1), path, rho), ConfigError);
  CHECK_THROWS_AS(ibp_identity_check(TimeSeries(1.0, 256, 2), path, rho), ConfigError);
}

TEST_CASE("stochastic-integral convergence demo") {
  StochIntDemoConfig cfg;
  cfg.paths = 40;
  cfg.fine_steps = 1024;
  cfg.perturb_integrand = false;
  cfg.coarsen_driver = false;
  const auto exact = stochint_convergence_demo(cfg);
  for (const auto& l : exact.levels) {
    CHECK(l.median == 0.0);
    CHECK(l.median_smoothed == 0.0);
  }

  cfg.perturb_integrand = true;
  cfg.coarsen_driver = true;
  cfg.drivers = 1;
  const auto one = stochint_convergence_demo(cfg);
  CHECK(one.median_decreasing);
  for (const auto& l : one.levels) CHECK(l.q25 <= l.median);
  for (const auto& l : one.levels) CHECK(l.median <= l.q75);

  cfg.drivers = 3;
  CHECK(stochint_convergence_demo(cfg).median_decreasing);

  cfg.levels = 2;
  CHECK_THROWS_AS(stochint_convergence_demo(cfg), ConfigError);
}
