#include "nest/solution_io.hpp"

#include <cmath>
#include <map>

#include "json.hpp"
#include "nest/instance_io.hpp"

namespace nest {

using nlohmann::json;

SolutionFile to_solution_file(const StripInstance& instance, const SolutionRecord& record, double time_limit_s) {
  SolutionFile f;
  f.instance_name = instance.name;
  f.strip_height = record.strip_height;
  f.strip_length = record.strip_length;
  f.density = record.density;
  f.seed = record.seed;
  f.time_limit_s = time_limit_s;
  const std::vector<ItemSpec> items = expand_items(instance);
  if (items.size() != record.placements.size()) throw IoError("record does not match the instance item count");
  for (std::size_t k = 0; k < items.size(); ++k) {
    const ItemType& type = instance.items[items[k].type];
    f.placements.push_back({type.id, to_source_frame(type, record.placements[k])});
  }
  return f;
}

SolutionRecord to_record(const StripInstance& instance, const SolutionFile& solution) {
  std::map<std::size_t, std::size_t> type_of;
  for (std::size_t k = 0; k < instance.items.size(); ++k) type_of[instance.items[k].id] = k;
  std::vector<std::vector<Transformation>> by_type(instance.items.size());
  for (const PlacementRecord& p : solution.placements) {
    auto it = type_of.find(p.item_id);
    if (it == type_of.end()) throw IoError("solution places unknown item " + std::to_string(p.item_id));
    by_type[it->second].push_back(from_source_frame(instance.items[it->second], p.t));
  }
  SolutionRecord r;
  r.strip_height = solution.strip_height;
  r.strip_length = solution.strip_length;
  r.density = solution.density;
  r.seed = solution.seed;
  for (std::size_t k = 0; k < instance.items.size(); ++k) {
    if (by_type[k].size() != static_cast<std::size_t>(instance.items[k].demand)) {
      throw IoError("item " + std::to_string(instance.items[k].id) + " is placed " +
                    std::to_string(by_type[k].size()) + " times, demand is " +
                    std::to_string(instance.items[k].demand));
    }
    r.placements.insert(r.placements.end(), by_type[k].begin(), by_type[k].end());
  }
  return r;
}

std::string solution_to_json(const SolutionFile& s) {
  nlohmann::ordered_json doc;
  doc["instance_name"] = s.instance_name;
  doc["strip_height"] = s.strip_height;
  doc["strip_length"] = s.strip_length;
  doc["density"] = s.density;
  doc["seed"] = s.seed;
  doc["time_limit_s"] = s.time_limit_s;
  doc["placements"] = nlohmann::ordered_json::array();
  for (const PlacementRecord& p : s.placements) {
    nlohmann::ordered_json e;
    e["item_id"] = p.item_id;
    e["dx"] = p.t.dx;
    e["dy"] = p.t.dy;
    e["theta_rad"] = p.t.theta;
    e["reflected"] = p.t.reflected;
    doc["placements"].push_back(e);
  }
  return doc.dump(2) + "\n";
}

namespace {

double number_field(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number()) throw IoError(std::string("solution field '") + key + "' must be a number");
  const double v = obj[key].get<double>();
  if (!std::isfinite(v)) throw IoError(std::string("solution field '") + key + "' must be finite");
  return v;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw IoError("unknown field '" + key + "' in solution");
  }
}

}  // namespace

SolutionFile parse_solution(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw IoError("solution must be an object");
  reject_unknown(doc, {"instance_name", "strip_height", "strip_length", "density", "seed", "time_limit_s",
                       "placements"});
  SolutionFile s;
  if (doc.contains("instance_name")) {
    if (!doc["instance_name"].is_string()) throw IoError("solution field 'instance_name' must be a string");
    s.instance_name = doc["instance_name"].get<std::string>();
  }
  s.strip_height = number_field(doc, "strip_height");
  s.strip_length = number_field(doc, "strip_length");
  s.density = number_field(doc, "density");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw IoError("solution field 'seed' must be a non-negative integer");
    s.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("time_limit_s")) s.time_limit_s = number_field(doc, "time_limit_s");
  if (!doc.contains("placements") || !doc["placements"].is_array()) throw IoError("solution has no placements array");
  for (const json& p : doc["placements"]) {
    if (!p.is_object()) throw IoError("placement must be an object");
    reject_unknown(p, {"item_id", "dx", "dy", "theta_rad", "reflected"});
    if (!p.contains("item_id") || !p["item_id"].is_number_unsigned()) {
      throw IoError("placement item_id must be a non-negative integer");
    }
    PlacementRecord r;
    r.item_id = p["item_id"].get<std::size_t>();
    r.t.dx = number_field(p, "dx");
    r.t.dy = number_field(p, "dy");
    r.t.theta = number_field(p, "theta_rad");
    if (p.contains("reflected")) {
      if (!p["reflected"].is_boolean()) throw IoError("placement reflected must be a boolean");
      r.t.reflected = p["reflected"].get<bool>();
    }
    s.placements.push_back(r);
  }
  return s;
}

SolutionFile load_solution(const std::filesystem::path& path) { return parse_solution(read_text_file(path)); }

void save_solution(const SolutionFile& solution, const std::filesystem::path& path) {
  write_text_file(path, solution_to_json(solution));
}

}  // namespace nest
