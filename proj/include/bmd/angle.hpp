#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bmd {

inline constexpr double pi = std::numbers::pi;

/// Reduces an angle into [0, pi). Accepts negative input.
inline double reduce_half_turn(double phi) {
  double r = std::fmod(phi, pi);
  if (r < 0.0) r += pi;
  if (r >= pi) r = 0.0;  // fmod of a tiny negative can round up to pi
  return r;
}

/// Representative of `phi` in [origin, origin + pi).
inline double in_window(double phi, double origin) {
  return origin + reduce_half_turn(phi - origin);
}

/// Distance between two directions modulo pi, in [0, pi/2].
inline double half_turn_distance(double a, double b) {
  const double d = reduce_half_turn(a - b);
  return std::min(d, pi - d);
}

}  // namespace bmd
