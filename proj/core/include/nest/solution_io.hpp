#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nest/strip.hpp"

namespace nest {

/// One placed item copy in instance-file coordinates.
struct PlacementRecord {
  std::size_t item_id = 0;
  Transformation t;
};

struct SolutionFile {
  std::string instance_name;
  double strip_height = 0.0;
  double strip_length = 0.0;
  double density = 0.0;
  std::uint64_t seed = 0;
  double time_limit_s = 0.0;
  std::vector<PlacementRecord> placements;
};

SolutionFile to_solution_file(const StripInstance& instance, const SolutionRecord& record, double time_limit_s);

/// Solver-frame record of a solution file. Placements are matched to item
/// copies in file order per item id. Throws IoError on unknown ids or a
/// placement count that differs from the demand.
SolutionRecord to_record(const StripInstance& instance, const SolutionFile& solution);

std::string solution_to_json(const SolutionFile& solution);
SolutionFile parse_solution(std::string_view json_text);
SolutionFile load_solution(const std::filesystem::path& path);
void save_solution(const SolutionFile& solution, const std::filesystem::path& path);

}  // namespace nest
