#pragma once

// Radial functions of planar symmetric star bodies.
//
// A Gauge stores r(phi) > 0, the distance from the origin to the boundary in
// direction phi. Every body here is centrally symmetric, so r has period pi and
// evaluation always starts by reducing phi into [0, pi).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bmd/angle.hpp"
#include "bmd/ellipse.hpp"
#include "bmd/error.hpp"
#include "bmd/vec2.hpp"

namespace bmd {

enum class GaugeKind { polygon, lp, samples, ellipse, circle };

inline std::string_view to_string(GaugeKind kind) {
  switch (kind) {
    case GaugeKind::polygon: return "polygon";
    case GaugeKind::lp: return "lp";
    case GaugeKind::samples: return "samples";
    case GaugeKind::ellipse: return "ellipse";
    case GaugeKind::circle: return "circle";
  }
  return "unknown";
}

enum class SampleInterpolation { linear, monotone_cubic };

namespace detail {

/// Star polygon stored counter-clockwise with strictly increasing vertex angles in [0, 2pi).
class PolygonBody {
 public:
  PolygonBody(std::vector<Vec2> ccw_vertices, std::vector<double> angles)
      : vertices_(std::move(ccw_vertices)), angles_(std::move(angles)) {}

  double radius(double phi) const {
    // phi in [0, pi); the body is symmetric so the half-turn suffices.
    const auto it = std::upper_bound(angles_.begin(), angles_.end(), phi);
    const std::size_t n = vertices_.size();
    const std::size_t i = it == angles_.begin() ? n - 1 : static_cast<std::size_t>(it - angles_.begin()) - 1;
    const Vec2 v = vertices_[i];
    const Vec2 edge = vertices_[(i + 1) % n] - v;
    return cross(v, edge) / cross(unit(phi), edge);
  }

  const std::vector<Vec2>& vertices() const { return vertices_; }

  std::vector<double> breakpoints() const {
    std::vector<double> out;
    out.reserve(angles_.size());
    for (double a : angles_) out.push_back(reduce_half_turn(a));
    return out;
  }

 private:
  std::vector<Vec2> vertices_;
  std::vector<double> angles_;
};

struct LpBody {
  double p;

  double radius(double phi) const {
    const double c = std::abs(std::cos(phi));
    const double s = std::abs(std::sin(phi));
    const double hi = std::max(c, s);
    if (std::isinf(p)) return 1.0 / hi;
    const double lo = std::min(c, s);
    // (c^p + s^p)^(1/p) = hi (1 + (lo/hi)^p)^(1/p), stable for large p.
    return 1.0 / (hi * std::pow(1.0 + std::pow(lo / hi, p), 1.0 / p));
  }

  std::vector<double> breakpoints() const {
    if (p == 2.0) return {};
    return {0.0, pi / 4.0, pi / 2.0, 3.0 * pi / 4.0};
  }
};

class SampledBody {
 public:
  SampledBody(std::vector<double> values, SampleInterpolation mode)
      : values_(std::move(values)), mode_(mode) {
    if (mode_ == SampleInterpolation::monotone_cubic) slopes_ = monotone_slopes(values_);
  }

  double radius(double phi) const {
    const std::size_t n = values_.size();
    const double x = phi * static_cast<double>(n) / pi;
    const auto k = std::min(static_cast<std::size_t>(x), n - 1);
    const double t = x - static_cast<double>(k);
    const double v0 = values_[k];
    const double v1 = values_[(k + 1) % n];
    if (mode_ == SampleInterpolation::linear) return (1.0 - t) * v0 + t * v1;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * v0 + (t3 - 2 * t2 + t) * slopes_[k] + (-2 * t3 + 3 * t2) * v1 +
           (t3 - t2) * slopes_[(k + 1) % n];
  }

  std::vector<double> breakpoints() const {
    if (mode_ != SampleInterpolation::linear) return {};
    std::vector<double> out(values_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<double>(k) * pi / static_cast<double>(out.size());
    return out;
  }

  const std::vector<double>& values() const { return values_; }
  SampleInterpolation mode() const { return mode_; }

 private:
  // Fritsch-Butland slopes on the periodic unit-spaced grid; zero at local extrema.
  static std::vector<double> monotone_slopes(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<double> d(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double left = v[k] - v[(k + n - 1) % n];
      const double right = v[(k + 1) % n] - v[k];
      if (left * right > 0.0) d[k] = 2.0 * left * right / (left + right);
    }
    return d;
  }

  std::vector<double> values_;
  SampleInterpolation mode_;
  std::vector<double> slopes_;
};

struct EllipseBody {
  EllipseParams params;
  double radius(double phi) const { return params.rho(phi); }
  double log_radius(double phi) const { return params.log_rho(phi); }
  std::vector<double> breakpoints() const { return {}; }
};

struct CircleBody {
  double r;
  double radius(double) const { return r; }
  std::vector<double> breakpoints() const { return {}; }
};

inline double symmetry_tolerance(std::span<const Vec2> vertices) {
  double scale = 1.0;
  for (const Vec2& v : vertices) scale = std::max(scale, norm(v));
  return 1e-12 * scale;
}

inline bool is_symmetric(std::span<const Vec2> vertices) {
  const double tol = symmetry_tolerance(vertices);
  for (const Vec2& v : vertices) {
    const bool found = std::any_of(vertices.begin(), vertices.end(),
                                   [&](const Vec2& w) { return norm(v + w) <= tol; });
    if (!found) return false;
  }
  return true;
}

// Validates that every ray from the origin crosses the closed polyline once and
// returns the vertices in counter-clockwise order.
inline std::vector<Vec2> star_shaped_ccw(std::vector<Vec2> vertices) {
  const std::size_t n = vertices.size();
  double winding = 0.0;
  int positive = 0;
  int negative = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 v = vertices[i];
    const Vec2 w = vertices[(i + 1) % n];
    const double scale = norm(v) * norm(w);
    if (scale == 0.0) throw Error(ErrorCode::OriginOutside, "a vertex coincides with the origin");
    const double c = cross(v, w);
    const double d = dot(v, w);
    if (std::abs(c) <= 1e-14 * scale) {
      if (d < 0.0) throw Error(ErrorCode::OriginOutside, "the origin lies on an edge");
      throw Error(ErrorCode::NotStarShaped, "two consecutive vertices lie on one ray");
    }
    winding += std::atan2(c, d);
    (c > 0.0 ? positive : negative) += 1;
  }
  if (std::abs(winding) < pi) throw Error(ErrorCode::OriginOutside, "the origin is outside the polygon");
  if ((positive > 0 && negative > 0) || std::abs(std::abs(winding) - 2.0 * pi) > 1e-9) {
    throw Error(ErrorCode::NotStarShaped, "polygon is not star-shaped about the origin");
  }
  if (negative > 0) std::reverse(vertices.begin(), vertices.end());
  return vertices;
}

inline double full_turn_angle(Vec2 v) {
  double a = angle_of(v);
  if (a < 0.0) a += 2.0 * pi;
  if (a >= 2.0 * pi) a = 0.0;
  return a;
}

}  // namespace detail

/// Immutable radial function of a symmetric star body.
class Gauge {
 public:
  using Body = std::variant<detail::PolygonBody, detail::LpBody, detail::SampledBody,
                            detail::EllipseBody, detail::CircleBody>;

  explicit Gauge(Body body) : body_(std::move(body)) {}

  GaugeKind kind() const { return static_cast<GaugeKind>(body_.index()); }

  double radius(double phi) const {
    const double t = reduce_half_turn(phi);
    return std::visit([t](const auto& b) { return b.radius(t); }, body_);
  }

  double log_radius(double phi) const {
    const double t = reduce_half_turn(phi);
    if (const auto* e = std::get_if<detail::EllipseBody>(&body_)) return e->log_radius(t);
    return std::log(radius(t));
  }

  /// Boundary point in direction phi.
  Vec2 boundary_point(double phi) const { return radius(phi) * unit(phi); }

  /// Angles in [0, pi) where r may fail to be smooth, sorted and unique.
  std::vector<double> breakpoints() const {
    auto pts = std::visit([](const auto& b) { return b.breakpoints(); }, body_);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
  }

  /// Polygon vertices (counter-clockwise), empty for other kinds.
  std::span<const Vec2> vertices() const {
    if (const auto* p = std::get_if<detail::PolygonBody>(&body_)) return p->vertices();
    return {};
  }

  const Body& body() const { return body_; }

 private:
  Body body_;
};

inline double gauge_eval(const Gauge& g, double phi) { return g.radius(phi); }
inline double log_eval(const Gauge& g, double phi) { return g.log_radius(phi); }

/// Polygon body. With `symmetrize`, a vertex list that is not already centrally
/// symmetric is completed by appending its antipodal image in order.
inline Gauge gauge_from_polygon(std::vector<Vec2> vertices, bool symmetrize = false) {
  for (const Vec2& v : vertices) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw Error(ErrorCode::InvalidInput, "vertex coordinates must be finite");
    }
  }
  if (!detail::is_symmetric(vertices)) {
    if (!symmetrize) throw Error(ErrorCode::NotSymmetric, "vertex set is not centrally symmetric");
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) vertices.push_back(-vertices[i]);
  }
  if (vertices.size() < 3) throw Error(ErrorCode::TooFewVertices, "need at least 3 vertices");

  auto ccw = detail::star_shaped_ccw(std::move(vertices));
  const auto first = std::min_element(ccw.begin(), ccw.end(), [](Vec2 a, Vec2 b) {
    return detail::full_turn_angle(a) < detail::full_turn_angle(b);
  });
  std::rotate(ccw.begin(), first, ccw.end());
  std::vector<double> angles(ccw.size());
  std::transform(ccw.begin(), ccw.end(), angles.begin(), detail::full_turn_angle);
  return Gauge(detail::PolygonBody(std::move(ccw), std::move(angles)));
}

/// Unit ball of l_p; pass infinity for the max-norm.
inline Gauge gauge_from_lp(double p) {
  if (std::isnan(p) || p < 1.0) throw Error(ErrorCode::InvalidExponent, "need p >= 1");
  return Gauge(detail::LpBody{p});
}

/// Radii sampled at phi_k = k pi / N, k = 0..N-1.
inline Gauge gauge_from_samples(std::vector<double> values,
                                SampleInterpolation mode = SampleInterpolation::linear) {
  if (values.size() < 8) throw Error(ErrorCode::TooFewSamples, "need at least 8 samples");
  for (double v : values) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw Error(ErrorCode::NonPositiveSample, "samples must be positive and finite");
    }
  }
  return Gauge(detail::SampledBody(std::move(values), mode));
}

inline Gauge gauge_from_ellipse(const EllipseParams& params) { return Gauge(detail::EllipseBody{params}); }

inline Gauge gauge_circle(double radius = 1.0) {
  if (!std::isfinite(radius) || !(radius > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "circle radius must be positive");
  }
  return Gauge(detail::CircleBody{radius});
}

}  // namespace bmd
