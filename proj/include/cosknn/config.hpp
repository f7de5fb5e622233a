#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cosknn/scenario.hpp"

namespace cosknn {

/// Reads a scenario from flat `section.key = value` lines (`#` comments).
/// Every key not given takes its documented default. Unknown keys,
/// duplicates, malformed values and constraint violations throw ConfigError
/// naming the key.
ScenarioConfig parse_config(const std::filesystem::path& path);
ScenarioConfig parse_config_text(std::string_view text);

/// Every key with its resolved value, one per line, in a fixed order.
/// parse_config_text(render_config(c)) == c.
std::string render_config(const ScenarioConfig& cfg);

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double value);

}  // namespace cosknn
