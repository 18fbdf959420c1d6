#pragma once

// JSON form of a state: {"d", "n", "s", "modes": [[k...]...], "coeffs": [[re, im]...]}.
// coeffs is mode-major, d entries per mode, in the order of "modes".

#include <string>

#include <json.hpp>

#include "seuler/spaces.hpp"

namespace seuler {

struct StoredState {
  SpectralState state;
  int sobolev_order = 0;
};

nlohmann::json state_to_json(const SpectralState& x, int sobolev_order);
/// Rejects documents whose mode list is not the canonical list for (d, n).
StoredState state_from_json(const nlohmann::json& j);

void write_state(const std::string& path, const SpectralState& x, int sobolev_order);
StoredState read_state(const std::string& path);

}  // namespace seuler
