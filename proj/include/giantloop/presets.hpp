#pragma once

// Named scenarios reproducing the published figure panels.

#include <optional>
#include <string_view>
#include <vector>

#include "giantloop/core.hpp"

namespace giantloop {

/// fig2a, fig2b, fig3a..fig3c, fig4a..fig4c, fig5a..fig5d in that order.
const std::vector<std::string_view>& preset_names();

/// The preset's configuration, or nullopt for an unknown name.
std::optional<ScenarioConfig> preset(std::string_view name);

}  // namespace giantloop
