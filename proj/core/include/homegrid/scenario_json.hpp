#pragma once

#include "homegrid/scenario.hpp"

#include <string>

namespace homegrid {

// Parses scenario JSON. Unknown keys are rejected with a path-qualified
// message, syntax errors carry line and column, and the parsed scenario must
// pass validate_scenario. All failures throw std::invalid_argument (or
// std::runtime_error for unreadable files in the path-based variant).
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

// Canonical serialization: fixed key order, numerics quantized to 6 decimals.
// Expanded scenarios (predecessor links) have no file representation and are
// rejected; save the pre-expansion scenario instead.
std::string scenario_to_json(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);

// Field-by-field equality, used for round-trip checks.
bool structurally_equal(const Scenario& a, const Scenario& b);

}  // namespace homegrid
