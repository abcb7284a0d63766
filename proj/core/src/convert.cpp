#include "nest/convert.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "nest/instance_io.hpp"

namespace nest {

namespace pt = boost::property_tree;
using nlohmann::ordered_json;

namespace {

struct RawItem {
  std::vector<std::array<double, 2>> outer;
  std::vector<std::vector<std::array<double, 2>>> holes;
  int demand = 1;
  std::optional<std::vector<double>> angles;
};

std::string emit(const std::string& name, double height, const std::vector<RawItem>& items) {
  ordered_json doc;
  doc["name"] = name;
  doc["strip_height"] = height;
  doc["items"] = ordered_json::array();
  for (std::size_t k = 0; k < items.size(); ++k) {
    ordered_json item;
    item["id"] = k;
    item["demand"] = items[k].demand;
    if (items[k].angles) {
      item["allowed_orientations"] = *items[k].angles;
    } else {
      item["allowed_orientations"] = "continuous";
    }
    item["allow_reflection"] = false;
    item["shape"]["outer"] = items[k].outer;
    item["shape"]["holes"] = items[k].holes;
    doc["items"].push_back(item);
  }
  std::string text = doc.dump(2) + "\n";
  parse_instance(text);
  return text;
}

// --- ESICUP XML ---------------------------------------------------------

const pt::ptree& child(const pt::ptree& t, const std::string& path) {
  auto c = t.get_child_optional(path);
  if (!c) throw IoError("ESICUP XML: missing element <" + path + ">");
  return *c;
}

std::vector<std::array<double, 2>> polygon_vertices(const pt::ptree& polygon) {
  std::vector<std::array<double, 2>> out;
  for (const auto& [tag, seg] : child(polygon, "lines")) {
    if (tag != "segment") continue;
    out.push_back({seg.get<double>("<xmlattr>.x0"), seg.get<double>("<xmlattr>.y0")});
  }
  if (out.size() < 3) throw IoError("ESICUP XML: polygon with fewer than three segments");
  return out;
}

struct Component {
  std::string polygon;
  double dx = 0.0;
  double dy = 0.0;
};

Component single_component(const pt::ptree& piece) {
  std::vector<Component> cs;
  for (const auto& [tag, c] : piece) {
    if (tag != "component") continue;
    cs.push_back({c.get<std::string>("<xmlattr>.idPolygon"), c.get<double>("<xmlattr>.xOffset", 0.0),
                  c.get<double>("<xmlattr>.yOffset", 0.0)});
  }
  if (cs.size() != 1) throw IoError("ESICUP XML: pieces must consist of exactly one component");
  return cs.front();
}

}  // namespace

std::string convert_esicup_xml(std::string_view xml_text) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml_text)};
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw IoError(std::string("malformed XML: ") + e.what());
  }
  try {
    const pt::ptree& root = child(tree, "nesting");
    const std::string name = root.get<std::string>("name", "");

    std::map<std::string, std::vector<std::array<double, 2>>> polygons;
    for (const auto& [tag, p] : child(root, "polygons")) {
      if (tag == "polygon") polygons[p.get<std::string>("<xmlattr>.id")] = polygon_vertices(p);
    }
    auto lookup = [&](const Component& c) {
      auto it = polygons.find(c.polygon);
      if (it == polygons.end()) throw IoError("ESICUP XML: unknown polygon " + c.polygon);
      auto v = it->second;
      for (auto& p : v) {
        p[0] += c.dx;
        p[1] += c.dy;
      }
      return v;
    };

    const pt::ptree& problem = child(root, "problem");
    double height = 0.0;
    for (const auto& [tag, board] : child(problem, "boards")) {
      if (tag != "piece") continue;
      const auto v = lookup(single_component(board));
      double lo = INFINITY, hi = -INFINITY;
      for (const auto& p : v) {
        lo = std::min(lo, p[1]);
        hi = std::max(hi, p[1]);
      }
      height = std::max(height, hi - lo);
    }
    if (!(height > 0.0)) throw IoError("ESICUP XML: no board defines the strip height");

    std::vector<RawItem> items;
    for (const auto& [tag, piece] : child(problem, "lot")) {
      if (tag != "piece") continue;
      RawItem item;
      item.demand = piece.get<int>("<xmlattr>.quantity", 1);
      item.outer = lookup(single_component(piece));
      item.angles = std::vector<double>{0.0};
      if (auto o = piece.get_child_optional("orientation")) {
        std::vector<double> angles;
        bool other = false;
        for (const auto& [otag, e] : *o) {
          if (otag == "enumeration") {
            angles.push_back(e.get<double>("<xmlattr>.angle"));
          } else if (otag != "<xmlattr>") {
            other = true;
          }
        }
        if (other || angles.empty()) {
          item.angles.reset();
        } else {
          item.angles = angles;
        }
      }
      items.push_back(std::move(item));
    }
    if (items.empty()) throw IoError("ESICUP XML: the lot has no pieces");
    return emit(name, height, items);
  } catch (const pt::ptree_error& e) {
    throw IoError(std::string("ESICUP XML: ") + e.what());
  }
}

// --- jagua-rs JSON ------------------------------------------------------

namespace {

const nlohmann::json* field(const nlohmann::json& obj, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (obj.contains(n)) return &obj[n];
  }
  return nullptr;
}

std::vector<std::array<double, 2>> points(const nlohmann::json& arr) {
  std::vector<std::array<double, 2>> out;
  for (const auto& p : arr) out.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return out;
}

}  // namespace

std::string convert_jagua_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(std::string("malformed JSON: ") + e.what());
  }
  try {
    const auto* name = field(doc, {"name", "Name"});
    double height = 0.0;
    if (const auto* h = field(doc, {"strip_height", "StripHeight"})) {
      height = h->get<double>();
    } else if (const auto* s = field(doc, {"strip", "Strip"})) {
      height = field(*s, {"height", "Height"}) ? field(*s, {"height", "Height"})->get<double>() : 0.0;
    }
    if (!(height > 0.0)) throw IoError("jagua JSON: no strip height");
    const auto* raw_items = field(doc, {"items", "Items"});
    if (!raw_items || !raw_items->is_array()) throw IoError("jagua JSON: no items array");

    std::vector<RawItem> items;
    for (const auto& it : *raw_items) {
      RawItem item;
      if (const auto* d = field(it, {"demand", "Demand"})) item.demand = d->get<int>();
      const auto* o = field(it, {"allowed_orientations", "AllowedOrientations"});
      if (o && o->is_array()) item.angles = o->get<std::vector<double>>();
      const auto* shape = field(it, {"shape", "Shape"});
      if (!shape) throw IoError("jagua JSON: item without shape");
      const auto* type = field(*shape, {"type", "Type"});
      const auto* data = field(*shape, {"data", "Data"});
      if (!type || !data) throw IoError("jagua JSON: shape needs type and data");
      const std::string t = type->get<std::string>();
      if (t == "simple_polygon" || t == "SimplePolygon") {
        item.outer = points(*data);
      } else if (t == "polygon" || t == "Polygon") {
        const auto* outer = field(*data, {"outer", "Outer"});
        if (!outer) throw IoError("jagua JSON: polygon without outer ring");
        item.outer = points(*outer);
        if (const auto* inner = field(*data, {"inner", "Inner"})) {
          for (const auto& h : *inner) item.holes.push_back(points(h));
        }
      } else {
        throw IoError("jagua JSON: unsupported shape type " + t);
      }
      items.push_back(std::move(item));
    }
    return emit(name && name->is_string() ? name->get<std::string>() : "", height, items);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("jagua JSON: ") + e.what());
  }
}

std::string convert_to_instance_json(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '<') return convert_esicup_xml(text);
  return convert_jagua_json(text);
}

}  // namespace nest
