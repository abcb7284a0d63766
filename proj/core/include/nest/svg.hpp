#pragma once

#include <filesystem>
#include <string>

#include "nest/solution_io.hpp"

namespace nest {

/// SVG 1.1 document: the strip rectangle, one even-odd path per placed item
/// and a density caption. The y axis points up, as in the instance.
std::string svg_document(const StripInstance& instance, const SolutionFile& solution);

void render_svg(const StripInstance& instance, const SolutionFile& solution, const std::filesystem::path& path);

}  // namespace nest
