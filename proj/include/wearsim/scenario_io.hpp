#pragma once

#include <string>

#include "wearsim/scenario.hpp"

namespace wearsim {

// Parse a scenario JSON document. Unknown keys are hard errors; exactly one
// of temperature_C / temperature_K must be present. Throws ConfigError.
TrojanScenario parse_scenario_json(const std::string& text);
TrojanScenario load_scenario_file(const std::string& path);

// Report JSON including a 50-bin TTF histogram per population. Byte-stable
// for identical inputs.
std::string report_to_json(const TrojanScenario& s, const ScenarioReport& r);

// Per-device CSV: header device_id,ttf,failed_before_mission,population then
// one row per device per population, values at 17 significant digits, LF
// line endings.
std::string report_to_csv(const TrojanScenario& s, const ScenarioReport& r);

}  // namespace wearsim
