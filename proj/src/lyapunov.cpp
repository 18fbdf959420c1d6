#include "seuler/lyapunov.hpp"

#include <algorithm>
#include <cmath>

namespace seuler {

namespace {

// Quintic Hermite basis on [0, 1]: value, first and second derivative at each end.
constexpr std::array<std::array<double, 6>, 6> hermite5{{
    {1, 0, 0, -10, 15, -6},       // value at 0
    {0, 1, 0, -6, 8, -3},         // slope at 0
    {0, 0, 0.5, -1.5, 1.5, -0.5}, // curvature at 0
    {0, 0, 0, 10, -15, 6},        // value at 1
    {0, 0, 0, -4, 7, -3},         // slope at 1
    {0, 0, 0, 0.5, -1, 0.5},      // curvature at 1
}};

double poly(const std::array<double, 6>& c, double t, int deriv) {
  double acc = 0.0;
  for (int p = 5; p >= deriv; --p) {
    double coef = c[p];
    for (int m = 0; m < deriv; ++m) coef *= (p - m);
    acc = acc * t + coef;
  }
  return acc;
}

}  // namespace

LyapunovProfile::LyapunovProfile(double radius, std::optional<double> plateau)
    : R_(radius), a_(plateau.value_or(default_plateau(radius))) {
  if (!(R_ > 0.0)) throw ConfigError("Lyapunov radius R must be positive");
  const double top = std::log(2.0 * R_);
  if (!(a_ > 0.0 && a_ < top)) throw ConfigError("plateau value a must lie in (0, log 2R)");

  // Targets in t = (r - R)/R, so d/dr = (1/R) d/dt.
  const std::array<double, 6> targets{a_, 0.0, 0.0, top, R_ / (2.0 * R_), -R_ * R_ / (4.0 * R_ * R_)};
  for (std::size_t b = 0; b < 6; ++b)
    for (std::size_t p = 0; p < 6; ++p) c_[p] += targets[b] * hermite5[b][p];

  constexpr int grid = 4096;
  for (int i = 0; i <= grid; ++i) {
    const double t = static_cast<double>(i) / grid;
    if (poly(c_, t, 1) < -1e-12)
      throw ConfigError("Lyapunov bridge is not monotone for this (R, a)");
  }
}

double LyapunovProfile::phi(double r) const {
  if (r <= R_) return a_;
  if (r >= 2.0 * R_) return std::log(r);
  return poly(c_, (r - R_) / R_, 0);
}

double LyapunovProfile::dphi(double r) const {
  if (r <= R_) return 0.0;
  if (r >= 2.0 * R_) return 1.0 / r;
  return poly(c_, (r - R_) / R_, 1) / R_;
}

double LyapunovProfile::d2phi(double r) const {
  if (r <= R_) return 0.0;
  if (r >= 2.0 * R_) return -1.0 / (r * r);
  return poly(c_, (r - R_) / R_, 2) / (R_ * R_);
}

double Lyapunov::value(const SpectralState& x) const {
  return profile_.phi(space_.norm(x, Level::plus_one));
}

double Lyapunov::gradient_pairing(const SpectralState& x, const SpectralState& v) const {
  const double r = space_.norm(x, Level::plus_one);
  const double slope = profile_.dphi(r);
  if (slope == 0.0) return 0.0;
  return slope * space_.inner_product(x, v, Level::plus_one) / r;
}

double Lyapunov::hessian_quadform(const SpectralState& x, const SpectralState& v) const {
  const double r = space_.norm(x, Level::plus_one);
  const double slope = profile_.dphi(r);
  const double curv = profile_.d2phi(r);
  if (slope == 0.0 && curv == 0.0) return 0.0;
  const double xv = space_.inner_product(x, v, Level::plus_one);
  const double vv = space_.norm_squared(v, Level::plus_one);
  const double radial2 = xv * xv / (r * r);
  return curv * radial2 + slope * (vv - radial2) / r;
}

double Lyapunov::generator(const SpectralState& x, const Evaluation& eval) const {
  if (space_.norm(x, Level::plus_one) <= profile_.radius()) return 0.0;
  return gradient_pairing(x, eval.drift) + 0.5 * hessian_quadform(x, eval.f * x);
}

double Lyapunov::generator(const Model& model, const SpectralState& x) const {
  if (space_.norm(x, Level::plus_one) <= profile_.radius()) return 0.0;
  return generator(x, model.evaluate(x));
}

std::string to_string(Region r) {
  switch (r) {
    case Region::plateau: return "plateau";
    case Region::annulus: return "annulus";
    case Region::far_strong: return "far_strong_noise";
    case Region::far_weak: return "far_weak_noise";
  }
  return "?";
}

bool BoundReport::plateau_ok() const {
  const auto& s = regions[static_cast<int>(Region::plateau)];
  return s.count == 0 || s.max_generator == 0.0;
}

bool BoundReport::far_strong_ok() const {
  const auto& s = regions[static_cast<int>(Region::far_strong)];
  return s.count == 0 || s.max_generator <= far_strong_tolerance;
}

bool BoundReport::far_weak_ok() const {
  const auto& s = regions[static_cast<int>(Region::far_weak)];
  if (!far_weak_bound) return true;
  return s.count == 0 || s.max_generator <= *far_weak_bound;
}

std::optional<SpectralState> sample_in_region(const Lyapunov& lyap, const Model& model,
                                              const std::function<SpectralState(Rng&)>& direction,
                                              Region region, Rng& rng, int max_attempts) {
  const double R = lyap.profile().radius();
  const auto* noise = model.noise();
  const double G = (noise && noise->G) ? *noise->G : std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    SpectralState u = direction(rng);
    const double r1 = lyap.space().norm(u, Level::plus_one);
    if (!(r1 > 0.0)) continue;
    double lambda = 0.0;
    switch (region) {
      case Region::plateau:
        lambda = R * uniform01(rng) / r1;
        break;
      case Region::annulus:
        lambda = R * (1.0 + uniform01(rng)) / r1;
        break;
      case Region::far_strong: {
        const double g1 = model.growth(u);
        if (!(g1 > 0.0) || !std::isfinite(G)) continue;
        const double lo = std::max(2.0 * R / r1, G / g1) * (1.0 + 1e-9);
        lambda = lo * std::exp(4.0 * uniform01(rng));
        break;
      }
      case Region::far_weak: {
        const double g1 = model.growth(u);
        const double lo = 2.0 * R / r1;
        if (!std::isfinite(G)) {
          lambda = lo * std::exp(4.0 * uniform01(rng));
          break;
        }
        const double hi = g1 > 0.0 ? G / g1 : std::numeric_limits<double>::infinity();
        if (hi < lo) continue;
        const double top = std::min(hi, lo * std::exp(4.0));
        lambda = lo * std::pow(top / lo, uniform01(rng));
        break;
      }
    }
    u *= lambda;
    return u;
  }
  return std::nullopt;
}

BoundReport verify_bound(const Lyapunov& lyap, std::span<const ScanLevel> levels,
                         std::size_t per_region, std::uint64_t seed) {
  BoundReport rep;
  for (const auto& lvl : levels) {
    const auto* noise = lvl.model->noise();
    if (noise && noise->G) {
      rep.G = *noise->G;
      rep.far_weak_bound = *noise->G + 0.5 * (*noise->L) * (*noise->L);
    }
  }
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const auto& lvl = levels[li];
    double level_c = 0.0;
    for (Region region : all_regions) {
      auto& stats = rep.regions[static_cast<int>(region)];
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(lvl.n), static_cast<std::uint64_t>(region)}));
      for (std::size_t i = 0; i < per_region; ++i) {
        ++stats.requested;
        auto x = sample_in_region(lyap, *lvl.model, lvl.direction, region, rng);
        if (!x) continue;
        const double r = lyap.space().norm(*x, Level::plus_one);
        double gen = 0.0;
        if (r > lyap.profile().radius()) {
          const auto eval = lvl.model->evaluate(*x);
          gen = lyap.generator(*x, eval);
          stats.max_g = std::max(stats.max_g, eval.g);
          stats.max_f = std::max(stats.max_f, eval.f);
        }
        ++stats.count;
        stats.max_generator = std::max(stats.max_generator, gen);
        const double ratio = std::max(0.0, gen / lyap.profile().phi(r));
        stats.max_ratio = std::max(stats.max_ratio, ratio);
        level_c = std::max(level_c, ratio);
      }
    }
    rep.levels.push_back(lvl.n);
    rep.c_lyap_per_level.push_back(level_c);
    rep.c_lyap = std::max(rep.c_lyap, level_c);
  }
  return rep;
}

}  // namespace seuler
