#pragma once

#include <string_view>

#include "nest/strip.hpp"

namespace nest {

/// Applies a flat JSON object of parameter overrides, e.g.
/// {"r_x": 0.002, "n_workers": 4, "tl_split": [0.7, 0.3]}. Unknown names
/// throw IoError; the result is validated.
SolverConfig apply_config_overrides(SolverConfig cfg, std::string_view json_text);

}  // namespace nest
