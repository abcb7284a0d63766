#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "nest/strip.hpp"

namespace nest {

/// Unreadable files and documents that do not match the expected schema.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Parses an instance document. Unknown fields, non-finite coordinates,
/// invalid polygons and items that fit no orientation are rejected with
/// distinct IoError messages.
StripInstance parse_instance(std::string_view json_text);
StripInstance load_instance(const std::filesystem::path& path);

std::string instance_to_json(const StripInstance& instance);
void save_instance(const StripInstance& instance, const std::filesystem::path& path);

}  // namespace nest
