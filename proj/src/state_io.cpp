#include "seuler/state_io.hpp"

#include <fstream>

namespace seuler {

nlohmann::json state_to_json(const SpectralState& x, int sobolev_order) {
  const auto& ms = *x.mode_set();
  nlohmann::json j;
  j["d"] = ms.dimension();
  j["n"] = ms.truncation();
  j["s"] = sobolev_order;
  auto modes = nlohmann::json::array();
  for (const auto& k : ms.modes()) {
    auto row = nlohmann::json::array();
    for (int c = 0; c < ms.dimension(); ++c) row.push_back(k[c]);
    modes.push_back(std::move(row));
  }
  j["modes"] = std::move(modes);
  auto coeffs = nlohmann::json::array();
  for (const auto& z : x.coeffs()) coeffs.push_back({z.real(), z.imag()});
  j["coeffs"] = std::move(coeffs);
  return j;
}

StoredState state_from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  const int n = j.at("n").get<int>();
  auto ms = ModeSet::make(d, n);
  const auto& modes = j.at("modes");
  if (modes.size() != ms->size()) throw ConfigError("state JSON: mode count mismatch");
  for (std::size_t i = 0; i < ms->size(); ++i) {
    const auto& row = modes[i];
    if (row.size() != static_cast<std::size_t>(d)) throw ConfigError("state JSON: bad wavevector");
    for (int c = 0; c < d; ++c)
      if (row[c].get<int>() != (*ms)[i][c])
        throw ConfigError("state JSON: modes not in canonical order");
  }
  const auto& coeffs = j.at("coeffs");
  std::vector<Complex> c;
  c.reserve(coeffs.size());
  for (const auto& z : coeffs) c.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
  return {SpectralState(ms, std::move(c)), j.at("s").get<int>()};
}

void write_state(const std::string& path, const SpectralState& x, int sobolev_order) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << state_to_json(x, sobolev_order).dump() << '\n';
}

StoredState read_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return state_from_json(nlohmann::json::parse(in));
}

}  // namespace seuler
