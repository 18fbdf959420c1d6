#include "seuler/noise.hpp"

#include <cmath>

namespace seuler {

NoiseConfig derive_constants(double beta, double c_noise, double ctilde) {
  if (!(c_noise > 0.0)) throw ConfigError("c_noise must be positive");
  if (!(ctilde > 0.0)) throw ConfigError("C~ must be positive");
  if (beta < 0.5) throw ConfigError("beta < 1/2 is not supported by the superlinear noise class");
  NoiseConfig cfg{c_noise, beta, ctilde, {}, {}, {}};
  cfg.K = 0.0;
  if (beta == 0.5) {
    if (!(c_noise * c_noise > 2.0 * ctilde))
      throw ConfigError("beta = 1/2 requires c_noise^2 > 2 C~");
    cfg.G = 1.0;
  } else {
    // c² g^{2β} / C~^{2β} >= 2g  <=>  g^{2β-1} >= 2 C~^{2β} / c²
    cfg.G = std::pow(2.0 * std::pow(ctilde, 2.0 * beta) / (c_noise * c_noise),
                     1.0 / (2.0 * beta - 1.0));
  }
  cfg.L = c_noise * std::pow(1.0 + (*cfg.G) * (*cfg.G) / (ctilde * ctilde), beta / 2.0);
  return cfg;
}

double noise_factor(const NoiseConfig& cfg, double size) {
  return cfg.c_noise * std::pow(1.0 + size * size, cfg.beta / 2.0);
}

double f_of(const SpectralState& u, const NoiseConfig& cfg, int oversampling) {
  return noise_factor(cfg, winf_norm(u, oversampling));
}

SpectralState sigma(const SpectralState& u, const NoiseConfig& cfg, int oversampling) {
  return f_of(u, cfg, oversampling) * u;
}

AssumptionCReport check_assumption_c(std::span<const double> winf_values, const NoiseConfig& cfg) {
  if (!cfg.derived()) throw ConfigError("noise constants have not been derived");
  AssumptionCReport rep;
  for (std::size_t i = 0; i < winf_values.size(); ++i) {
    const double g = cfg.ctilde * winf_values[i];
    if (!(g > *cfg.G)) {
      ++rep.skipped;
      continue;
    }
    ++rep.checked;
    const double f = noise_factor(cfg, winf_values[i]);
    if (f * f < 2.0 * g - *cfg.K) rep.violations.push_back({i, g, f});
  }
  return rep;
}

AssumptionCReport check_assumption_c(std::span<const SpectralState> samples,
                                     const NoiseConfig& cfg, int oversampling) {
  std::vector<double> w;
  w.reserve(samples.size());
  for (const auto& u : samples) w.push_back(winf_norm(u, oversampling));
  return check_assumption_c(w, cfg);
}

}  // namespace seuler
