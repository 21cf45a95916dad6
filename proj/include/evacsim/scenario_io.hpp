#pragma once

#include <string>

#include "evacsim/model.hpp"

namespace evacsim {

/// Parse a scenario document (JSON syntax, units as documented in the
/// README: ms, m, s, miles). Unknown keys are rejected; missing keys take
/// the documented defaults. Throws std::invalid_argument on bad fields.
ScenarioParams scenario_from_json(const std::string& text);

/// Serialize with stable key order; round-trips losslessly.
std::string scenario_to_json(const ScenarioParams& scn);

ScenarioParams load_scenario(const std::string& path);
void save_scenario(const ScenarioParams& scn, const std::string& path);

}  // namespace evacsim
