#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chemowall/config.hpp"

namespace chemowall {

/// Names of the built-in scenarios, fig4 through fig13.
const std::vector<std::string>& preset_names();

std::optional<ScenarioConfig> find_preset(std::string_view name);

/// Throws InvalidInput for unknown names.
ScenarioConfig preset(std::string_view name);

/// Random/Wiener config pair for the side-by-side presets (fig12, fig13).
/// The second config is the Wiener model with the same parameters.
std::pair<ScenarioConfig, ScenarioConfig> compare_preset(std::string_view name);

}  // namespace chemowall
