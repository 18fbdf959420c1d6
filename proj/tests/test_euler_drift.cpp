#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "seuler/euler_drift.hpp"

using namespace seuler;

namespace {

constexpr double pi = std::numbers::pi;

// Direct Fourier sum of u and its partials at one point.
struct PointValue {
  double u[3] = {};
  double du[3][3] = {};  // du[i][j] = ∂_i u_j
};

PointValue evaluate_at(const SpectralState& u, const double* x) {
  const auto& ms = *u.mode_set();
  const int d = ms.dimension();
  PointValue pv;
  for (std::size_t m = 0; m < ms.size(); ++m) {
    double phase = 0.0;
    for (int i = 0; i < d; ++i) phase += ms[m][i] * x[i];
    const Complex e = std::polar(1.0, phase);
    for (int j = 0; j < d; ++j) {
      const Complex v = u.at(m, j) * e;
      pv.u[j] += v.real();
      for (int i = 0; i < d; ++i) pv.du[i][j] += (Complex(0.0, ms[m][i]) * v).real();
    }
  }
  return pv;
}

// max(sup|u|, max_ij sup|∂_i u_j|) over the (2qn)^d grid by direct summation.
double brute_winf(const SpectralState& u, int q) {
  const int d = u.dimension();
  const int side = 2 * q * u.mode_set()->truncation();
  const std::size_t total = static_cast<std::size_t>(std::pow(side, d));
  double best = 0.0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    double x[3] = {};
    std::size_t r = idx;
    for (int i = d - 1; i >= 0; --i) {
      x[i] = 2.0 * pi * static_cast<double>(r % side) / side;
      r /= side;
    }
    const auto pv = evaluate_at(u, x);
    double v2 = 0.0;
    for (int j = 0; j < d; ++j) {
      v2 += pv.u[j] * pv.u[j];
      for (int i = 0; i < d; ++i) best = std::max(best, std::abs(pv.du[i][j]));
    }
    best = std::max(best, std::sqrt(v2));
  }
  return best;
}

// (u·∇)u by pointwise products on a grid fine enough to be alias-free, then a
// direct discrete Fourier transform restricted to the retained modes.
SpectralState brute_advection(const SpectralState& u) {
  const auto& ms = *u.mode_set();
  const int d = ms.dimension();
  const int side = 4 * ms.truncation() + 2;
  const std::size_t total = static_cast<std::size_t>(std::pow(side, d));
  SpectralState out(u.mode_set());
  for (std::size_t idx = 0; idx < total; ++idx) {
    double x[3] = {};
    std::size_t r = idx;
    for (int i = d - 1; i >= 0; --i) {
      x[i] = 2.0 * pi * static_cast<double>(r % side) / side;
      r /= side;
    }
    const auto pv = evaluate_at(u, x);
    double adv[3] = {};
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) adv[j] += pv.u[i] * pv.du[i][j];
    for (std::size_t m = 0; m < ms.size(); ++m) {
      double phase = 0.0;
      for (int i = 0; i < d; ++i) phase += ms[m][i] * x[i];
      const Complex e = std::polar(1.0 / static_cast<double>(total), -phase);
      for (int j = 0; j < d; ++j) out.at(m, j) += adv[j] * e;
    }
  }
  return out;
}

double max_abs_diff(const SpectralState& a, const SpectralState& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

double max_abs(const SpectralState& a) {
  double m = 0.0;
  for (auto c : a.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

SpectralState shear(const ModeSetPtr& ms) {
  // u = (cos y, 0)
  SpectralState u(ms);
  u.at(ms->index_of({0, 1, 0}), 0) = 0.5;
  u.at(ms->index_of({0, -1, 0}), 0) = 0.5;
  return u;
}

SpectralState taylor_green(const ModeSetPtr& ms) {
  // u = (cos x sin y, -sin x cos y)
  SpectralState u(ms);
  for (int kx : {-1, 1})
    for (int ky : {-1, 1}) {
      u.at(ms->index_of({kx, ky, 0}), 0) = Complex(0.0, -0.25 * ky);
      u.at(ms->index_of({kx, ky, 0}), 1) = Complex(0.0, 0.25 * kx);
    }
  return u;
}

}  // namespace

TEST_CASE("Leray projector examples") {
  const auto ms = ModeSet::make(2, 3);
  SpectralState v(ms);
  v.at(ms->index_of({1, 1, 0}), 0) = 1.0;
  const auto p = leray_project(v);
  CHECK(std::abs(p.at(ms->index_of({1, 1, 0}), 0) - 0.5) < 1e-15);
  CHECK(std::abs(p.at(ms->index_of({1, 1, 0}), 1) + 0.5) < 1e-15);

  // Gradient field û(k) = i k φ(k).
  Rng rng(2);
  const auto phi = random_state(ms, rng, 0.0);
  SpectralState grad(ms);
  for (std::size_t m = 0; m < ms->size(); ++m)
    for (int c = 0; c < 2; ++c) grad.at(m, c) = Complex(0.0, (*ms)[m][c]) * phi.at(m, 0);
  CHECK(max_abs(leray_project(grad)) < 1e-15 * max_abs(grad) * 10);

  const auto u = random_velocity(ms, rng, 1.0);
  CHECK(max_abs_diff(leray_project(u), u) < 1e-15);
}

TEST_CASE("Leray projector: idempotent, divergence-free, self-adjoint, non-expansive") {
  const SpaceTriple sp(3, 4);
  for (int d : {2, 3}) {
    const auto ms = ModeSet::make(d, d == 2 ? 8 : 3);
    const SpaceTriple space(d, 4);
    Rng rng(40 + d);
    for (int i = 0; i < 200; ++i) {
      const auto v = random_state(ms, rng, 2.0 * uniform01(rng));
      const auto w = random_state(ms, rng, 1.0);
      const auto pv = leray_project(v);
      CHECK(max_abs_diff(leray_project(pv), pv) <= 1e-12 * max_abs(pv));
      CHECK(pv.divergence_defect() < 1e-12);
      for (Level l : {Level::minus_one, Level::zero, Level::plus_one}) {
        CHECK(space.norm(pv, l) <= space.norm(v, l) * (1.0 + 1e-14));
        const double a = space.inner_product(pv, w, l);
        const double b = space.inner_product(v, leray_project(w), l);
        CHECK(std::abs(a - b) <= 1e-12 * space.norm(v, l) * space.norm(w, l));
      }
    }
  }
}

TEST_CASE("shear flow is a steady state") {
  const auto ms = ModeSet::make(2, 4);
  const SpaceTriple sp(2, 4);
  const auto u = shear(ms);
  CHECK(max_abs(nonlinearity(u)) == 0.0);
  CHECK(winf_norm(u, 4) == doctest::Approx(1.0).epsilon(1e-14));
  DriftConfig dc;
  CHECK(g_of(u, dc) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(drift_pairing(u, sp) == 0.0);
}

TEST_CASE("Taylor-Green advection matches the hand expansion") {
  const auto ms = ModeSet::make(2, 3);
  const auto u = taylor_green(ms);
  CHECK(u.divergence_defect() == 0.0);
  // (u·∇)u = -½ (sin 2x, sin 2y), a pure gradient.
  SpectralState expected(ms);
  expected.at(ms->index_of({2, 0, 0}), 0) = Complex(0.0, 0.25);
  expected.at(ms->index_of({-2, 0, 0}), 0) = Complex(0.0, -0.25);
  expected.at(ms->index_of({0, 2, 0}), 1) = Complex(0.0, 0.25);
  expected.at(ms->index_of({0, -2, 0}), 1) = Complex(0.0, -0.25);
  CHECK(max_abs_diff(advection(u), expected) < 1e-15);
  CHECK(max_abs(nonlinearity(u)) < 1e-15);
}

TEST_CASE("truncated convolution agrees with an alias-free grid product") {
  for (int d : {2, 3}) {
    const auto ms = ModeSet::make(d, d == 2 ? 3 : 2);
    Rng rng(7 + d);
    for (int trial = 0; trial < 3; ++trial) {
      const auto u = random_velocity(ms, rng, 1.0);
      const auto fast = advection(u);
      const auto slow = brute_advection(u);
      CHECK(max_abs_diff(fast, slow) < 1e-12 * max_abs(slow));
      CHECK(max_abs_diff(fast, advection_triads(u)) < 1e-12 * max_abs(slow));
    }
  }
  // Padded grid against the triad sum at sizes the direct DFT cannot reach.
  for (int n : {5, 8, 11}) {
    const auto ms = ModeSet::make(2, n);
    Rng rng(100 + n);
    const auto u = random_velocity(ms, rng, 1.0);
    const auto ref = advection_triads(u);
    CHECK(max_abs_diff(advection(u), ref) < 1e-12 * max_abs(ref));
  }
}

TEST_CASE("nonlinearity: reality, incompressibility, energy conservation") {
  const auto ms = ModeSet::make(2, 8);
  Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    const auto u = random_velocity(ms, rng, 2.0 * uniform01(rng));
    const auto b = nonlinearity(u);
    CHECK(b.hermitian_defect() <= 1e-13 * max_abs(b));
    CHECK(b.divergence_defect() < 1e-12);
    const double scale = weighted_norm(u, 0) * weighted_norm(u, 0) * weighted_norm(u, 1);
    CHECK(std::abs(weighted_inner(b, u, 0)) < 1e-10 * scale);
  }
}

TEST_CASE("W1,inf estimator agrees with direct summation") {
  for (int d : {2, 3}) {
    const auto ms = ModeSet::make(d, d == 2 ? 4 : 2);
    Rng rng(19 + d);
    for (int trial = 0; trial < 3; ++trial) {
      const auto u = random_velocity(ms, rng, 1.5);
      const double fast = winf_norm(u, 4);
      const double slow = brute_winf(u, 4);
      CHECK(std::abs(fast - slow) < 1e-12 * slow);
    }
  }
  const auto ms = ModeSet::make(2, 5);
  CHECK(winf_norm(SpectralState(ms), 4) == 0.0);
  Rng rng(3);
  const auto u = random_velocity(ms, rng, 1.0);
  for (double lambda : {0.1, 3.0, 250.0}) {
    CHECK(std::abs(winf_norm(lambda * u, 4) - lambda * winf_norm(u, 4)) <
          1e-12 * lambda * winf_norm(u, 4));
    DriftConfig dc;
    dc.ctilde = 0.7;
    CHECK(std::abs(g_of(lambda * u, dc) - lambda * g_of(u, dc)) < 1e-12 * lambda * g_of(u, dc));
  }
  CHECK_THROWS_AS(winf_norm(u, 1), ConfigError);
}

TEST_CASE("C~ calibration") {
  const SpaceTriple sp(2, 4);
  std::vector<ModeSetPtr> sets{ModeSet::make(2, 4), ModeSet::make(2, 8)};

  std::vector<SpectralState> zeros(5, SpectralState(sets[0]));
  CHECK_THROWS_AS(calibrate_ctilde(zeros, sp, 4), ConfigError);
  CHECK_THROWS_AS(calibrate_ctilde(sets, sp, 4, 50, 1), ConfigError);

  const auto a = calibrate_ctilde(sets, sp, 4, 300, 99);
  const auto b = calibrate_ctilde(sets, sp, 4, 300, 99);
  CHECK(a.ctilde == b.ctilde);
  CHECK(a.used == 300);
  CHECK(a.ctilde == doctest::Approx(ctilde_safety_factor * a.max_ratio));

  // Fresh validation set: the drift-growth bound holds with the calibrated C~.
  Rng rng(derive_seed(12345, {1}));
  std::size_t violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto& ms = sets[i % 2];
    const auto u = sample_velocity(ms, rng);
    const double w = winf_norm(u, 4);
    if (!(drift_pairing(u, sp) <= a.ctilde * w * sp.norm_squared(u, Level::plus_one))) ++violations;
  }
  CHECK(violations == 0);
}
