#include "nest/quantify.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace nest {

double overlap_proxy_decay(const Polygon& a, const Polygon& b, const ProxyConfig& cfg) {
  const PoleSet& pa = a.poles();
  const PoleSet& pb = b.poles();
  if (pa.empty() || pb.empty()) throw std::invalid_argument("overlap proxy needs poles on both shapes");

  const double eps = cfg.r_epsilon * std::max(a.diameter(), b.diameter());
  const double eps2 = eps * eps;

  // Dense structure-of-arrays copy of b so the inner loop has no branches.
  std::array<double, kMaxPoles> bx{}, by{}, br{};
  const std::size_t nb = std::min<std::size_t>(pb.size(), kMaxPoles);
  for (std::size_t j = 0; j < nb; ++j) {
    bx[j] = pb[j].center.x;
    by[j] = pb[j].center.y;
    br[j] = pb[j].radius;
  }

  double alpha = 0.0;
  for (const Pole& p : pa) {
    for (std::size_t j = 0; j < nb; ++j) {
      const double dx = p.center.x - bx[j];
      const double dy = p.center.y - by[j];
      const double delta = p.radius + br[j] - std::sqrt(dx * dx + dy * dy);
      const double decayed = delta >= eps ? delta : eps2 / (-delta + 2.0 * eps);
      alpha += decayed * 2.0 * std::min(p.radius, br[j]);
    }
  }
  return alpha;
}

double evaluate_item_pair(const Layout& layout, ItemId a, ItemId b, const ProxyConfig& cfg) {
  const Polygon& sa = layout.placed_shape(a);
  const Polygon& sb = layout.placed_shape(b);
  if (!shapes_collide(sa, sb)) return 0.0;
  return quantify_collision(sa, sb, cfg);
}

}  // namespace nest
