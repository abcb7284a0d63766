#include "nest/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace nest {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw IoError("invalid instance: " + what); }

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) schema_error(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) schema_error("unknown field '" + key + "' in " + where);
  }
}

double finite_number(const json& v, const std::string& where) {
  if (!v.is_number()) schema_error(where + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) schema_error(where + " must be finite");
  return d;
}

Ring parse_ring(const json& v, const std::string& where) {
  if (!v.is_array()) schema_error(where + " must be an array of [x, y] pairs");
  Ring ring;
  for (const json& p : v) {
    if (!p.is_array() || p.size() != 2) schema_error(where + " must be an array of [x, y] pairs");
    ring.push_back({finite_number(p[0], where), finite_number(p[1], where)});
  }
  return ring;
}

ItemType parse_item(const json& j) {
  reject_unknown(j, {"id", "demand", "allowed_orientations", "allow_reflection", "shape"}, "item");
  if (!j.contains("id") || !j["id"].is_number_integer() || j["id"].get<long long>() < 0) {
    schema_error("item id must be a non-negative integer");
  }
  const auto id = j["id"].get<std::size_t>();
  const std::string where = "item " + std::to_string(id);

  int demand = 1;
  if (j.contains("demand")) {
    if (!j["demand"].is_number_integer() || j["demand"].get<long long>() < 1) {
      schema_error(where + " demand must be an integer >= 1");
    }
    demand = j["demand"].get<int>();
  }
  bool reflection = false;
  if (j.contains("allow_reflection")) {
    if (!j["allow_reflection"].is_boolean()) schema_error(where + " allow_reflection must be a boolean");
    reflection = j["allow_reflection"].get<bool>();
  }
  Orientations orientations;
  std::vector<double> degrees_list{0.0};
  orientations.allow_reflection = reflection;
  if (j.contains("allowed_orientations")) {
    const json& o = j["allowed_orientations"];
    if (o.is_string() && o.get<std::string>() == "continuous") {
      orientations.continuous = true;
      orientations.angles.clear();
      degrees_list.clear();
    } else if (o.is_array() && !o.empty()) {
      degrees_list.clear();
      for (const json& a : o) degrees_list.push_back(finite_number(a, where + " orientation"));
      orientations = discrete_orientations(degrees_list, reflection);
    } else {
      schema_error(where + " allowed_orientations must be \"continuous\" or a non-empty list of degrees");
    }
  }

  if (!j.contains("shape")) schema_error(where + " has no shape");
  const json& shape = j["shape"];
  reject_unknown(shape, {"outer", "holes"}, where + " shape");
  if (!shape.contains("outer")) schema_error(where + " shape has no outer ring");
  Ring outer = parse_ring(shape["outer"], where + " outer ring");
  std::vector<Ring> holes;
  if (shape.contains("holes")) {
    if (!shape["holes"].is_array()) schema_error(where + " holes must be an array of rings");
    for (const json& h : shape["holes"]) holes.push_back(parse_ring(h, where + " hole"));
  }

  ItemType type;
  try {
    type = make_item_type(id, std::move(outer), std::move(holes), demand, orientations);
  } catch (const GeometryError& e) {
    throw IoError(where + ": " + e.what());
  }
  type.angles_deg = degrees_list;
  return type;
}

}  // namespace

StripInstance parse_instance(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(doc, {"name", "strip_height", "items"}, "instance");
  StripInstance inst;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) schema_error("name must be a string");
    inst.name = doc["name"].get<std::string>();
  }
  if (!doc.contains("strip_height")) schema_error("missing strip_height");
  inst.strip_height = finite_number(doc["strip_height"], "strip_height");
  if (!(inst.strip_height > 0.0)) schema_error("strip_height must be positive");
  if (!doc.contains("items") || !doc["items"].is_array() || doc["items"].empty()) {
    schema_error("items must be a non-empty array");
  }
  std::set<std::size_t> ids;
  for (const json& item : doc["items"]) {
    inst.items.push_back(parse_item(item));
    if (!ids.insert(inst.items.back().id).second) {
      schema_error("duplicate item id " + std::to_string(inst.items.back().id));
    }
  }
  for (const ItemType& t : inst.items) {
    if (min_orientation_height(t) > inst.strip_height * (1.0 + 1e-9)) {
      throw IoError("item " + std::to_string(t.id) + " fits no orientation within the strip height");
    }
  }
  return inst;
}

StripInstance load_instance(const std::filesystem::path& path) { return parse_instance(read_text_file(path)); }

std::string instance_to_json(const StripInstance& instance) {
  auto ring_json = [](const Ring& r) {
    json a = json::array();
    for (const Point& p : r) a.push_back({p.x, p.y});
    return a;
  };
  nlohmann::ordered_json doc;
  doc["name"] = instance.name;
  doc["strip_height"] = instance.strip_height;
  doc["items"] = nlohmann::ordered_json::array();
  for (const ItemType& t : instance.items) {
    nlohmann::ordered_json item;
    item["id"] = t.id;
    item["demand"] = t.demand;
    if (t.orientations.continuous) {
      item["allowed_orientations"] = "continuous";
    } else {
      item["allowed_orientations"] = t.angles_deg;
    }
    item["allow_reflection"] = t.orientations.allow_reflection;
    nlohmann::ordered_json shape;
    shape["outer"] = ring_json(t.outer);
    json holes = json::array();
    for (const Ring& h : t.holes) holes.push_back(ring_json(h));
    shape["holes"] = holes;
    item["shape"] = shape;
    doc["items"].push_back(item);
  }
  return doc.dump(2) + "\n";
}

void save_instance(const StripInstance& instance, const std::filesystem::path& path) {
  write_text_file(path, instance_to_json(instance));
}

}  // namespace nest
