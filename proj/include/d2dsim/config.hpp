#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "d2dsim/offload.hpp"

namespace d2dsim {

// Builds a validated SimConfig from the documented schema. Violations raise
// ConfigError naming the field path.
SimConfig config_from_json(const nlohmann::json& doc);
SimConfig config_from_json_string(const std::string& text);

nlohmann::json config_to_json(const SimConfig& config);

// Parses the TOML subset used for config files (sections, scalar values,
// single-line arrays) into a json document with the same shape.
nlohmann::json parse_toml_subset(const std::string& text);

// Loads a config file; .toml and .json are distinguished by extension.
SimConfig load_config(const std::filesystem::path& path);

}  // namespace d2dsim
