#pragma once

#include "noshlab/dgp.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace noshlab::dgp {

/// Pretty-printed JSON with snake_case keys: n, gamma, rho, rho_power, tau, phi,
/// delta_x/delta_y {k3..k6}, theta_x {k4, k6}, theta_y {k5, k6}, error_dist.
/// Each triple is an object {"u", "v", "uv"}.
std::string scenario_to_json(const ScenarioConfig& config);

/// Strict parse: unknown keys and missing required keys are InputErrors.
/// rho_power defaults to 2 when absent.
ScenarioConfig scenario_from_json(std::string_view text);

ScenarioConfig load_scenario_file(const std::filesystem::path& path);

/// "1".."5" selects a built-in scenario; anything else is read as a JSON file path.
ScenarioConfig resolve_scenario(std::string_view id_or_path);

}  // namespace noshlab::dgp
