#pragma once

#include <cmath>

#include "nest/cde.hpp"
#include "nest/polygon.hpp"

namespace nest {

struct ProxyConfig {
  /// Fraction of the larger shape diameter used as the decay threshold.
  double r_epsilon = 0.01;
};

/// Penetration depth continued below `epsilon` by the hyperbola
/// eps^2 / (2 eps - delta): positive, continuous and increasing.
inline double decayed_pd(double delta, double epsilon) {
  return delta >= epsilon ? delta : epsilon * epsilon / (-delta + 2.0 * epsilon);
}

/// Sum over pole pairs of decayed penetration depth weighted by the smaller
/// pole diameter. Throws std::invalid_argument on an empty pole set.
double overlap_proxy_decay(const Polygon& a, const Polygon& b, const ProxyConfig& cfg);

/// Geometric mean of the two shape penalties.
inline double combined_penalty(const Polygon& a, const Polygon& b) {
  return std::sqrt(a.penalty_lambda() * b.penalty_lambda());
}

/// Severity of a collision between two colliding shapes:
/// sqrt(overlap proxy) scaled by the combined penalty.
inline double quantify_collision(const Polygon& a, const Polygon& b, const ProxyConfig& cfg) {
  return std::sqrt(overlap_proxy_decay(a, b, cfg)) * combined_penalty(a, b);
}

/// 0 when the placed items are apart, their collision severity otherwise.
double evaluate_item_pair(const Layout& layout, ItemId a, ItemId b, const ProxyConfig& cfg);

}  // namespace nest
