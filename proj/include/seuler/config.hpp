#pragma once

// Flat `key = value` experiment configuration; `#` starts a comment.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "seuler/integrator.hpp"

namespace seuler {

enum class ModelKind { euler2d, euler3d, toy_superlinear, custom };
std::string to_string(ModelKind k);
ModelKind parse_model_kind(const std::string& s);

struct ExperimentConfig {
  ModelKind model = ModelKind::euler2d;
  int d = 2;
  int n = 8;
  int s = 4;
  std::vector<int> n_list;  // Galerkin scans; empty means {n}

  bool noise_on = true;
  double c_noise = 1.0;
  double beta = 1.0;
  double ctilde = 0.0;  // <= 0: calibrate
  int oversampling = 4;
  std::size_t calibration_samples = 400;

  double R = 1.0;
  double a = 0.0;  // <= 0: default plateau

  std::string init = "taylor_green";  // shear | taylor_green | random | unit | zero
  double init_amplitude = 1.0;
  double init_decay = 3.0;
  std::uint64_t init_seed = 7;

  double T = 1.0;
  double dt = 1e-3;
  Scheme scheme = Scheme::tamed;
  double M_stop = 1e6;
  std::size_t thin = 1;

  std::size_t ensemble = 100;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out = "out";

  std::string experiment = "stats";  // ensemble sub-mode
  double alpha = 0.4;
  std::vector<double> M_multiples{4.0, 8.0, 16.0};
  std::vector<double> radii{1.0, 2.0, 4.0};
  std::size_t samples = 1000;

  std::size_t steps() const;
  /// Throws ConfigError on inconsistent values.
  void validate() const;
  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// Parses `key = value` text. Unknown keys are an error.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// Applies one `key = value` assignment.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

}  // namespace seuler
