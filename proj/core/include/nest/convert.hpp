#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace nest {

/// ESICUP nesting XML (boards/lot/polygons) to an instance document.
std::string convert_esicup_xml(std::string_view xml_text);

/// jagua-rs style JSON, in its PascalCase or snake_case flavor, to an
/// instance document.
std::string convert_jagua_json(std::string_view json_text);

/// Dispatches on content: XML when the first non-blank byte is '<'.
std::string convert_to_instance_json(const std::filesystem::path& path);

}  // namespace nest
