#include "nest/svg.hpp"

#include <fmt/format.h>

#include <map>

#include "nest/instance_io.hpp"
#include "nest/verify.hpp"

namespace nest {

namespace {

void append_ring(std::string& d, const Ring& r, double height) {
  for (std::size_t k = 0; k < r.size(); ++k) {
    d += fmt::format("{}{:.6f} {:.6f} ", k == 0 ? "M" : "L", r[k].x, height - r[k].y);
  }
  d += "Z ";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string svg_document(const StripInstance& instance, const SolutionFile& solution) {
  const double l = solution.strip_length;
  const double h = solution.strip_height;
  const double pad = 0.02 * std::max(l, h);
  const double caption = 0.06 * h;
  std::map<std::size_t, std::size_t> type_of;
  for (std::size_t k = 0; k < instance.items.size(); ++k) type_of[instance.items[k].id] = k;

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{:.6f} {:.6f} {:.6f} {:.6f}\">\n", -pad,
      -pad, l + 2 * pad, h + 2 * pad + caption);
  out += fmt::format(
      "  <rect class=\"strip\" x=\"0\" y=\"0\" width=\"{:.6f}\" height=\"{:.6f}\" fill=\"#f4f4f4\" stroke=\"#333\" "
      "stroke-width=\"{:.6f}\"/>\n",
      l, h, 0.002 * h);
  for (const PlacementRecord& p : solution.placements) {
    auto it = type_of.find(p.item_id);
    if (it == type_of.end()) continue;
    const PlacedRings rings = place_rings(instance.items[it->second], p.t);
    std::string d;
    append_ring(d, rings.outer, h);
    for (const Ring& hole : rings.holes) append_ring(d, hole, h);
    const unsigned hue = static_cast<unsigned>((it->second * 47) % 360);
    out += fmt::format(
        "  <path class=\"item\" data-item=\"{}\" d=\"{}\" fill=\"hsl({},60%,65%)\" fill-rule=\"evenodd\" "
        "stroke=\"#222\" stroke-width=\"{:.6f}\"/>\n",
        p.item_id, d, hue, 0.001 * h);
  }
  out += fmt::format(
      "  <text x=\"0\" y=\"{:.6f}\" font-size=\"{:.6f}\" font-family=\"sans-serif\">{} density {:.3f}% length "
      "{:.4f}</text>\n",
      h + 0.8 * caption, 0.6 * caption, escape(instance.name), solution.density, l);
  out += "</svg>\n";
  return out;
}

void render_svg(const StripInstance& instance, const SolutionFile& solution, const std::filesystem::path& path) {
  write_text_file(path, svg_document(instance, solution));
}

}  // namespace nest
