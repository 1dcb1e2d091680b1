#pragma once

// JSON body descriptors and report serialization.
//
// Body: {"kind": "polygon"|"lp"|"samples"|"ellipse"|"circle", <payload>}
// with exactly one payload field, the one belonging to the kind:
//   polygon  "vertices": [[x, y], ...]   (optional "symmetrize": bool)
//   lp       "p": number or "inf"
//   samples  "samples": [r0, r1, ...]    (optional "interpolation": "linear"|"cubic")
//   ellipse  "params": [a2, b2, c2]
//   circle   "radius": number (optional, default 1)

#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bmd/ellipse.hpp"
#include "bmd/error.hpp"
#include "bmd/gauge.hpp"
#include "bmd/oracle.hpp"
#include "bmd/report.hpp"
#include "bmd/solver.hpp"

namespace bmd {

using json = nlohmann::ordered_json;

namespace detail {

inline double number(const json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorCode::InvalidInput, std::string(what) + " must be a number");
  return j.get<double>();
}

inline std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

template <std::size_t N>
std::array<double, N> fixed_numbers(const json& j, const char* what) {
  const auto v = numbers(j, what);
  if (v.size() != N) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + " must have " + std::to_string(N) + " entries");
  }
  std::array<double, N> out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

inline Vec2 point(const json& j, const char* what) {
  const auto p = fixed_numbers<2>(j, what);
  return {p[0], p[1]};
}

inline const json& field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::InvalidInput, std::string("missing field '") + key + "'");
  return j.at(key);
}

// Drops the sign of zero so that output does not depend on it.
inline double clean(double v) { return v == 0.0 ? 0.0 : v; }

inline json vec(Vec2 p) { return json::array({clean(p.x), clean(p.y)}); }
inline json triple(const EllipseParams& e) { return json::array({clean(e.a2()), clean(e.b2()), clean(e.c2())}); }
inline json matrix(const PDMatrix2& m) {
  return json::array({json::array({clean(m.m11()), clean(m.m12())}), json::array({clean(m.m12()), clean(m.m22())})});
}
inline json pair_of(const std::array<Vec2, 2>& p) { return json::array({vec(p[0]), vec(p[1])}); }

inline PDMatrix2 parse_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidInput, std::string(what) + " must be 2x2");
  const auto r0 = fixed_numbers<2>(j[0], what);
  const auto r1 = fixed_numbers<2>(j[1], what);
  if (r0[1] != r1[0]) throw Error(ErrorCode::InvalidInput, std::string(what) + " must be symmetric");
  return {r0[0], r0[1], r1[1]};
}

inline std::array<Vec2, 2> parse_pair(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidInput, std::string(what) + " must hold 2 points");
  return {point(j[0], what), point(j[1], what)};
}

inline EllipseParams parse_triple(const json& j, const char* what) {
  const auto t = fixed_numbers<3>(j, what);
  return {t[0], t[1], t[2]};
}

}  // namespace detail

inline Gauge gauge_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "body descriptor must be an object");
  const json& kind_field = detail::field(j, "kind");
  if (!kind_field.is_string()) throw Error(ErrorCode::InvalidInput, "'kind' must be a string");
  const std::string kind = kind_field.get<std::string>();

  static const std::array<std::pair<const char*, const char*>, 5> payloads{{
      {"polygon", "vertices"}, {"lp", "p"}, {"samples", "samples"}, {"ellipse", "params"}, {"circle", "radius"}}};
  const char* expected = nullptr;
  for (const auto& [k, p] : payloads) {
    if (kind == k) expected = p;
  }
  if (!expected) throw Error(ErrorCode::InvalidInput, "unknown body kind '" + kind + "'");
  for (const auto& [k, p] : payloads) {
    if (std::string(p) != expected && j.contains(p)) {
      throw Error(ErrorCode::InvalidInput, std::string("field '") + p + "' does not belong to kind '" + kind + "'");
    }
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "kind" && key != "symmetrize" && key != "interpolation" && key != "name" &&
        std::none_of(payloads.begin(), payloads.end(), [&](const auto& kp) { return key == kp.second; })) {
      throw Error(ErrorCode::InvalidInput, "unknown field '" + key + "'");
    }
  }
  if ((j.contains("symmetrize") && kind != "polygon") || (j.contains("interpolation") && kind != "samples")) {
    throw Error(ErrorCode::InvalidInput, "option does not apply to kind '" + kind + "'");
  }

  if (kind == "polygon") {
    const json& v = detail::field(j, "vertices");
    if (!v.is_array()) throw Error(ErrorCode::InvalidInput, "'vertices' must be an array of [x, y]");
    std::vector<Vec2> verts;
    for (const auto& p : v) verts.push_back(detail::point(p, "vertex"));
    bool symmetrize = false;
    if (j.contains("symmetrize")) {
      if (!j["symmetrize"].is_boolean()) throw Error(ErrorCode::InvalidInput, "'symmetrize' must be a boolean");
      symmetrize = j["symmetrize"].get<bool>();
    }
    return gauge_from_polygon(std::move(verts), symmetrize);
  }
  if (kind == "lp") {
    const json& p = detail::field(j, "p");
    if (p.is_string()) {
      const auto s = p.get<std::string>();
      if (s != "inf" && s != "infinity") throw Error(ErrorCode::InvalidExponent, "p must be a number or \"inf\"");
      return gauge_from_lp(std::numeric_limits<double>::infinity());
    }
    return gauge_from_lp(detail::number(p, "p"));
  }
  if (kind == "samples") {
    auto mode = SampleInterpolation::linear;
    if (j.contains("interpolation")) {
      const json& m = j["interpolation"];
      if (m == "linear") {
        mode = SampleInterpolation::linear;
      } else if (m == "cubic") {
        mode = SampleInterpolation::monotone_cubic;
      } else {
        throw Error(ErrorCode::InvalidInput, "'interpolation' must be \"linear\" or \"cubic\"");
      }
    }
    return gauge_from_samples(detail::numbers(detail::field(j, "samples"), "samples"), mode);
  }
  if (kind == "ellipse") return gauge_from_ellipse(detail::parse_triple(detail::field(j, "params"), "params"));
  return gauge_circle(j.contains("radius") ? detail::number(j["radius"], "radius") : 1.0);
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, "'" + path + "' is not valid JSON: " + e.what());
  }
}

inline json certificate_to_json(const AlternanceCertificate& c) {
  return {{"phi", {c.phi1, c.phi2}},
          {"psi", {c.psi1, c.psi2}},
          {"residuals", {c.residuals[0], c.residuals[1], c.residuals[2], c.residuals[3]}},
          {"defect", c.defect}};
}

inline AlternanceCertificate certificate_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "'certificate' must be an object");
  const auto phi = detail::fixed_numbers<2>(detail::field(j, "phi"), "certificate.phi");
  const auto psi = detail::fixed_numbers<2>(detail::field(j, "psi"), "certificate.psi");
  AlternanceCertificate c;
  c.phi1 = phi[0];
  c.phi2 = phi[1];
  c.psi1 = psi[0];
  c.psi2 = psi[1];
  if (j.contains("residuals")) c.residuals = detail::fixed_numbers<4>(j["residuals"], "certificate.residuals");
  if (j.contains("defect")) c.defect = detail::number(j["defect"], "certificate.defect");
  return c;
}

inline json report_to_json(const SolveReport& r) {
  const auto& d = r.diagnostics;
  json outline = json::array();
  for (const Vec2& p : r.outline) outline.push_back(detail::vec(p));
  return {{"d2", r.d2},
          {"defect", r.defect},
          {"params_uniform", detail::triple(r.params_uniform)},
          {"params_inscribed", detail::triple(r.params_inscribed)},
          {"T_hat", detail::matrix(r.T_hat)},
          {"T_tilde", detail::matrix(r.T_tilde)},
          {"x_points", detail::pair_of(r.x_points)},
          {"y_points", detail::pair_of(r.y_points)},
          {"certificate", certificate_to_json(r.certificate)},
          {"cone_condition_ok", r.cone_condition_ok},
          {"one_sided_value", r.one_sided_value},
          {"u_points", detail::pair_of(r.u_points)},
          {"v_points", detail::pair_of(r.v_points)},
          {"diagnostics",
           {{"bisect_iterations", d.bisect_iterations},
            {"bracket_width", d.bracket_width},
            {"grid_defect", d.grid_defect},
            {"lp_margin", d.lp_margin},
            {"remez_iterations", d.remez_iterations},
            {"polished", d.polished},
            {"certificate_tol", d.certificate_tol},
            {"grid_points", d.grid_points}}},
          {"outline", outline}};
}

inline SolveReport report_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "report must be an object");
  SolveReport r;
  r.d2 = detail::number(detail::field(j, "d2"), "d2");
  r.defect = detail::number(detail::field(j, "defect"), "defect");
  r.params_uniform = detail::parse_triple(detail::field(j, "params_uniform"), "params_uniform");
  r.params_inscribed = detail::parse_triple(detail::field(j, "params_inscribed"), "params_inscribed");
  r.T_hat = detail::parse_matrix(detail::field(j, "T_hat"), "T_hat");
  r.T_tilde = j.contains("T_tilde") ? detail::parse_matrix(j["T_tilde"], "T_tilde") : r.T_hat.inverse();
  r.x_points = detail::parse_pair(detail::field(j, "x_points"), "x_points");
  r.y_points = detail::parse_pair(detail::field(j, "y_points"), "y_points");
  r.certificate = certificate_from_json(detail::field(j, "certificate"));
  const json& cone = detail::field(j, "cone_condition_ok");
  if (!cone.is_boolean()) throw Error(ErrorCode::InvalidInput, "'cone_condition_ok' must be a boolean");
  r.cone_condition_ok = cone.get<bool>();
  if (j.contains("one_sided_value")) r.one_sided_value = detail::number(j["one_sided_value"], "one_sided_value");
  if (j.contains("u_points")) r.u_points = detail::parse_pair(j["u_points"], "u_points");
  if (j.contains("v_points")) r.v_points = detail::parse_pair(j["v_points"], "v_points");
  if (j.contains("diagnostics") && j["diagnostics"].is_object()) {
    const json& d = j["diagnostics"];
    auto& out = r.diagnostics;
    out.bisect_iterations = d.value("bisect_iterations", 0);
    out.bracket_width = d.value("bracket_width", 0.0);
    out.grid_defect = d.value("grid_defect", 0.0);
    out.lp_margin = d.value("lp_margin", 0.0);
    out.remez_iterations = d.value("remez_iterations", 0);
    out.polished = d.value("polished", false);
    out.certificate_tol = d.value("certificate_tol", 0.0);
    out.grid_points = d.value("grid_points", std::size_t{0});
  }
  if (j.contains("outline")) {
    const json& o = j["outline"];
    if (!o.is_array()) throw Error(ErrorCode::InvalidInput, "'outline' must be an array of points");
    for (const auto& p : o) r.outline.push_back(detail::point(p, "outline"));
  }
  return r;
}

inline json oracle_to_json(const OracleResult& o) {
  const EllipseParams p = o.params();
  return {{"value", o.value},
          {"d2", std::exp(2.0 * o.value)},
          {"std_params", {{"a", o.best.a}, {"bprime", o.best.bprime}, {"theta", o.best.theta}}},
          {"params", detail::triple(p)},
          {"near_optimal_radius", o.near_optimal_radius},
          {"evaluations", o.evaluations},
          {"zoom_levels", o.zoom_levels}};
}

}  // namespace bmd
