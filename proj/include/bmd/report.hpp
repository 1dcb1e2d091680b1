#pragma once

// Geometric reading of a solution: the operator T_hat mapping the body between
// the unit circle and the circle of radius d2, the extremal points x_i and the
// contact points y_i.

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bmd/angle.hpp"
#include "bmd/ellipse.hpp"
#include "bmd/error.hpp"
#include "bmd/gauge.hpp"
#include "bmd/solver.hpp"
#include "bmd/vec2.hpp"

namespace bmd {

struct SolveReport {
  double d2 = 1.0;
  double defect = 0.0;
  EllipseParams params_uniform{1.0, 0.0, 0.0};
  EllipseParams params_inscribed{1.0, 0.0, 0.0};
  PDMatrix2 T_hat = PDMatrix2::identity();
  PDMatrix2 T_tilde = PDMatrix2::identity();
  std::array<Vec2, 2> x_points{};
  std::array<Vec2, 2> y_points{};
  AlternanceCertificate certificate;
  bool cone_condition_ok = false;
  /// max (f - g) for the inscribed ellipse.
  double one_sided_value = 0.0;
  /// Unit-circle directions of T_hat x_i and T_hat y_i.
  std::array<Vec2, 2> u_points{};
  std::array<Vec2, 2> v_points{};
  SolverDiagnostics diagnostics;
  /// Closed boundary polyline of the body, for drawing.
  std::vector<Vec2> outline;
};

namespace detail {

/// Strictly inside the open cone spanned by u and v (u, v not collinear).
inline bool in_open_cone(Vec2 y, Vec2 u, Vec2 v, double tol) {
  const double s = cross(u, v);
  if (std::abs(s) <= tol * norm(u) * norm(v)) return false;
  const double sign = s > 0.0 ? 1.0 : -1.0;
  return sign * cross(u, y) > tol * norm(u) * norm(y) && sign * cross(y, v) > tol * norm(y) * norm(v);
}

inline bool cone_condition(const std::array<Vec2, 2>& x, const std::array<Vec2, 2>& y, double tol) {
  return in_open_cone(y[0], x[0], x[1], tol) && in_open_cone(y[1], -x[0], x[1], tol);
}

inline std::vector<Vec2> body_outline(const Gauge& gauge, int samples = 720) {
  std::vector<Vec2> out;
  const auto verts = gauge.vertices();
  if (!verts.empty()) return {verts.begin(), verts.end()};
  out.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) out.push_back(gauge.boundary_point(2.0 * pi * k / samples));
  return out;
}

}  // namespace detail

/// Smallest and largest |T x| over boundary points x at `n` angles in [0, pi).
inline std::pair<double, double> image_radius_range(const Gauge& gauge, const PDMatrix2& t, int n) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int k = 0; k < n; ++k) {
    const double r = norm(t.apply(gauge.boundary_point(pi * k / n)));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  for (double phi : gauge.breakpoints()) {
    const double r = norm(t.apply(gauge.boundary_point(phi)));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

inline SolveReport build_report(const Gauge& gauge, const UniformSolution& sol) {
  SolveReport rep;
  const OneSidedSolution one = to_one_sided(gauge, sol);
  rep.defect = sol.defect;
  rep.d2 = std::exp(2.0 * sol.defect);
  rep.params_uniform = sol.params;
  rep.params_inscribed = one.params;
  rep.one_sided_value = one.value;
  rep.T_tilde = params_to_matrix(one.params);
  rep.T_hat = pd_sqrt(quadratic_form(one.params));
  rep.certificate = sol.certificate;
  rep.diagnostics = sol.diagnostics;

  const auto& c = sol.certificate;
  rep.x_points = {gauge.boundary_point(c.phi1), gauge.boundary_point(c.phi2)};
  rep.y_points = {gauge.boundary_point(c.psi1), gauge.boundary_point(c.psi2)};
  for (std::size_t i = 0; i < 2; ++i) {
    const Vec2 tx = rep.T_hat.apply(rep.x_points[i]);
    const Vec2 ty = rep.T_hat.apply(rep.y_points[i]);
    rep.u_points[i] = (1.0 / norm(tx)) * tx;
    rep.v_points[i] = (1.0 / norm(ty)) * ty;
  }
  rep.cone_condition_ok = detail::cone_condition(rep.x_points, rep.y_points, 1e-12);
  if (!rep.cone_condition_ok) {
    throw Error(ErrorCode::ConeViolation, "contact points do not separate the extremal points");
  }
  rep.outline = detail::body_outline(gauge);
  return rep;
}

/// Result of re-checking the characterisation of the optimal operator.
struct Theorem1Verdict {
  std::array<bool, 2> x_distance{};
  std::array<bool, 2> y_contact{};
  bool cone = false;
  bool x_distinct = false;
  bool y_distinct = false;
  bool inverse_pair = false;
  bool d2_consistent = false;

  bool passed() const {
    return x_distance[0] && x_distance[1] && y_contact[0] && y_contact[1] && cone && x_distinct && y_distinct &&
           inverse_pair && d2_consistent;
  }

  std::string describe() const {
    const auto mark = [](bool b) { return b ? "pass" : "FAIL"; };
    std::string s;
    s += std::string("|T x1| = d2: ") + mark(x_distance[0]);
    s += std::string("; |T x2| = d2: ") + mark(x_distance[1]);
    s += std::string("; |T y1| = 1: ") + mark(y_contact[0]);
    s += std::string("; |T y2| = 1: ") + mark(y_contact[1]);
    s += std::string("; cone: ") + mark(cone);
    s += std::string("; x1 != +-x2: ") + mark(x_distinct);
    s += std::string("; y1 != +-y2: ") + mark(y_distinct);
    s += std::string("; T_hat T_tilde = I: ") + mark(inverse_pair);
    s += std::string("; d2 = exp(2 defect): ") + mark(d2_consistent);
    return s;
  }
};

/// Puts x1, y1, x2, y2 (up to sign) in counter-clockwise order within the
/// half-turn starting at x1, swapping the y labels if needed.
inline void canonical_labels(std::array<Vec2, 2>& x, std::array<Vec2, 2>& y) {
  const double origin = angle_of(x[0]);
  const auto offset = [origin](Vec2 p) {
    double d = std::fmod(angle_of(p) - origin, 2.0 * pi);
    if (d < 0.0) d += 2.0 * pi;
    return d;
  };
  const auto window = [&](Vec2 p) { return offset(p) < pi ? p : -p; };
  x[1] = window(x[1]);
  y[0] = window(y[0]);
  y[1] = window(y[1]);
  if (offset(y[0]) > offset(y[1])) std::swap(y[0], y[1]);
}

inline Theorem1Verdict verify_theorem1(const SolveReport& rep, double tol, bool relabel = true) {
  Theorem1Verdict v;
  auto x = rep.x_points;
  auto y = rep.y_points;
  for (std::size_t i = 0; i < 2; ++i) {
    v.x_distance[i] = std::abs(norm(rep.T_hat.apply(x[i])) - rep.d2) <= tol;
    v.y_contact[i] = std::abs(norm(rep.T_hat.apply(y[i])) - 1.0) <= tol;
  }
  if (relabel) canonical_labels(x, y);
  v.cone = detail::cone_condition(x, y, 1e-12);
  v.x_distinct = half_turn_distance(angle_of(x[0]), angle_of(x[1])) > 1e-6;
  v.y_distinct = half_turn_distance(angle_of(y[0]), angle_of(y[1])) > 1e-6;

  const PDMatrix2& a = rep.T_hat;
  const PDMatrix2& b = rep.T_tilde;
  const double p11 = a.m11() * b.m11() + a.m12() * b.m12();
  const double p12 = a.m11() * b.m12() + a.m12() * b.m22();
  const double p21 = a.m12() * b.m11() + a.m22() * b.m12();
  const double p22 = a.m12() * b.m12() + a.m22() * b.m22();
  v.inverse_pair = std::abs(p11 - 1.0) <= 1e-10 && std::abs(p12) <= 1e-10 && std::abs(p21) <= 1e-10 &&
                   std::abs(p22 - 1.0) <= 1e-10;
  v.d2_consistent = std::abs(rep.d2 - std::exp(2.0 * rep.defect)) <= tol;
  return v;
}

}  // namespace bmd
