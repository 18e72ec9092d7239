#pragma once
// Scenario file format: one JSON document mirroring the Scenario type
// field-for-field ("schema": 1). Units are Hz, bytes, seconds and
// bytes/second throughout.

#include <filesystem>
#include <string>

#include "dado/infra.hpp"

namespace dado {

std::string scenario_to_json(const Scenario& s, int indent = 2);
Scenario scenario_from_json(const std::string& text);

void save_scenario(const Scenario& s, const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

// Stable content hash of the canonical JSON form; used to detect when two
// solutions refer to different scenarios.
std::string scenario_fingerprint(const Scenario& s);

}  // namespace dado
