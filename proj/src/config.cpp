#include "seuler/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace seuler {

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::euler2d: return "euler2d";
    case ModelKind::euler3d: return "euler3d";
    case ModelKind::toy_superlinear: return "toy_superlinear";
    case ModelKind::custom: return "custom";
  }
  return "?";
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "euler2d") return ModelKind::euler2d;
  if (s == "euler3d") return ModelKind::euler3d;
  if (s == "toy_superlinear" || s == "toy") return ModelKind::toy_superlinear;
  if (s == "custom") return ModelKind::custom;
  throw ConfigError("unknown model '" + s + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size()) throw ConfigError("config key '" + key + "': not a number: " + v);
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x)) throw ConfigError("config key '" + key + "': not an integer: " + v);
  return static_cast<long long>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': not a boolean: " + v);
}

template <typename T, typename F>
std::vector<T> to_list(const std::string& v, F conv) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(conv(item));
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& v) {
  if (key == "model") {
    c.model = parse_model_kind(v);
    if (c.model == ModelKind::euler3d) c.d = 3;
    if (c.model == ModelKind::euler2d) c.d = 2;
  } else if (key == "d") c.d = static_cast<int>(to_int(key, v));
  else if (key == "n") c.n = static_cast<int>(to_int(key, v));
  else if (key == "s") c.s = static_cast<int>(to_int(key, v));
  else if (key == "n_list") c.n_list = to_list<int>(v, [&](const std::string& x) { return static_cast<int>(to_int(key, x)); });
  else if (key == "noise") c.noise_on = to_bool(key, v);
  else if (key == "c_noise") c.c_noise = to_double(key, v);
  else if (key == "beta") c.beta = to_double(key, v);
  else if (key == "ctilde") c.ctilde = to_double(key, v);
  else if (key == "oversampling" || key == "q") c.oversampling = static_cast<int>(to_int(key, v));
  else if (key == "calibration_samples") c.calibration_samples = static_cast<std::size_t>(to_int(key, v));
  else if (key == "R") c.R = to_double(key, v);
  else if (key == "a") c.a = to_double(key, v);
  else if (key == "init") c.init = v;
  else if (key == "init_amplitude") c.init_amplitude = to_double(key, v);
  else if (key == "init_decay") c.init_decay = to_double(key, v);
  else if (key == "init_seed") c.init_seed = static_cast<std::uint64_t>(to_int(key, v));
  else if (key == "T") c.T = to_double(key, v);
  else if (key == "dt") c.dt = to_double(key, v);
  else if (key == "scheme") c.scheme = parse_scheme(v);
  else if (key == "M_stop") c.M_stop = to_double(key, v);
  else if (key == "thin") c.thin = static_cast<std::size_t>(to_int(key, v));
  else if (key == "ensemble") c.ensemble = static_cast<std::size_t>(to_int(key, v));
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(key, v));
  else if (key == "threads") c.threads = static_cast<int>(to_int(key, v));
  else if (key == "out") c.out = v;
  else if (key == "experiment") c.experiment = v;
  else if (key == "alpha") c.alpha = to_double(key, v);
  else if (key == "M_multiples") c.M_multiples = to_list<double>(v, [&](const std::string& x) { return to_double(key, x); });
  else if (key == "radii") c.radii = to_list<double>(v, [&](const std::string& x) { return to_double(key, x); });
  else if (key == "samples") c.samples = static_cast<std::size_t>(to_int(key, v));
  else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::size_t ExperimentConfig::steps() const {
  return static_cast<std::size_t>(std::llround(T / dt));
}

void ExperimentConfig::validate() const {
  if (d != 2 && d != 3) throw ConfigError("d must be 2 or 3");
  if (n < 1) throw ConfigError("n must be >= 1");
  for (int m : n_list)
    if (m < 1) throw ConfigError("n_list entries must be >= 1");
  const bool euler = model == ModelKind::euler2d || model == ModelKind::euler3d;
  if (euler && !(s > d / 2.0 + 2.0)) throw ConfigError("Euler models need s > d/2 + 2");
  if (!(T > 0.0) || !(dt > 0.0) || steps() < 1) throw ConfigError("T and dt must be positive");
  if (std::abs(static_cast<double>(steps()) * dt - T) > 1e-9 * T)
    throw ConfigError("T must be an integer multiple of dt");
  if (noise_on && !(c_noise > 0.0)) throw ConfigError("c_noise must be positive");
  if (!(R > 0.0)) throw ConfigError("R must be positive");
  if (!(M_stop > 0.0)) throw ConfigError("M_stop must be positive");
  if (thin < 1) throw ConfigError("thin must be >= 1");
  if (ensemble < 1) throw ConfigError("ensemble must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (oversampling < 2) throw ConfigError("oversampling must be >= 2");
}

nlohmann::json ExperimentConfig::to_json() const {
  return {
      {"model", to_string(model)}, {"d", d}, {"n", n}, {"s", s}, {"n_list", n_list},
      {"noise", noise_on}, {"c_noise", c_noise}, {"beta", beta}, {"ctilde", ctilde},
      {"oversampling", oversampling}, {"calibration_samples", calibration_samples},
      {"R", R}, {"a", a}, {"init", init}, {"init_amplitude", init_amplitude},
      {"init_decay", init_decay}, {"init_seed", init_seed}, {"T", T}, {"dt", dt},
      {"scheme", to_string(scheme)}, {"M_stop", M_stop}, {"thin", thin},
      {"ensemble", ensemble}, {"seed", seed}, {"threads", threads}, {"out", out},
      {"experiment", experiment}, {"alpha", alpha}, {"M_multiples", M_multiples},
      {"radii", radii}, {"samples", samples},
  };
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "model = " << to_string(model) << "\n"
     << "d = " << d << "\nn = " << n << "\ns = " << s << "\n";
  if (!n_list.empty()) os << "n_list = " << join(n_list) << "\n";
  os << "noise = " << (noise_on ? "on" : "off") << "\n"
     << "c_noise = " << c_noise << "\nbeta = " << beta << "\nctilde = " << ctilde << "\n"
     << "oversampling = " << oversampling << "\ncalibration_samples = " << calibration_samples << "\n"
     << "R = " << R << "\na = " << a << "\n"
     << "init = " << init << "\ninit_amplitude = " << init_amplitude << "\n"
     << "init_decay = " << init_decay << "\ninit_seed = " << init_seed << "\n"
     << "T = " << T << "\ndt = " << dt << "\nscheme = " << to_string(scheme) << "\n"
     << "M_stop = " << M_stop << "\nthin = " << thin << "\n"
     << "ensemble = " << ensemble << "\nseed = " << seed << "\nthreads = " << threads << "\n"
     << "out = " << out << "\nexperiment = " << experiment << "\nalpha = " << alpha << "\n"
     << "M_multiples = " << join(M_multiples) << "\nradii = " << join(radii) << "\n"
     << "samples = " << samples << "\n";
  return os.str();
}

}  // namespace seuler
