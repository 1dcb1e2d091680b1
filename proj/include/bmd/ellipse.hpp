#pragma once

// Origin-centred ellipses in polar form.
//
// An ellipse is described by the trigonometric polynomial
//   R(phi) = a2 + b2 cos 2phi + c2 sin 2phi,
// its polar radius being rho(phi) = R(phi)^(-1/2). The triple is a genuine
// ellipse iff it lies in the open cone a2 > 0, a2^2 > b2^2 + c2^2.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "bmd/angle.hpp"
#include "bmd/error.hpp"
#include "bmd/linalg.hpp"
#include "bmd/vec2.hpp"

namespace bmd {

/// Raw coefficients of a + b cos 2phi + c sin 2phi, not necessarily in the cone.
struct TrigTriple {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double value(double phi) const { return a + b * std::cos(2.0 * phi) + c * std::sin(2.0 * phi); }
  double derivative(double phi) const {
    return -2.0 * b * std::sin(2.0 * phi) + 2.0 * c * std::cos(2.0 * phi);
  }
  bool in_cone() const {
    return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && a > 0.0 &&
           std::hypot(b, c) < a;
  }
  friend bool operator==(const TrigTriple&, const TrigTriple&) = default;
};

/// A triple from the open cone K. Construction validates membership.
class EllipseParams {
 public:
  EllipseParams(double a2, double b2, double c2) : t_{a2, b2, c2} {
    if (!t_.in_cone()) {
      throw Error(ErrorCode::NotInCone, "(" + std::to_string(a2) + ", " + std::to_string(b2) +
                                            ", " + std::to_string(c2) + ") is not an ellipse");
    }
  }
  explicit EllipseParams(const TrigTriple& t) : EllipseParams(t.a, t.b, t.c) {}

  double a2() const { return t_.a; }
  double b2() const { return t_.b; }
  double c2() const { return t_.c; }
  const TrigTriple& triple() const { return t_; }

  /// rho^-2 at phi.
  double trig(double phi) const { return t_.value(phi); }
  double rho(double phi) const { return 1.0 / std::sqrt(t_.value(phi)); }
  /// g = log rho = -(1/2) log R.
  double log_rho(double phi) const { return -0.5 * std::log(t_.value(phi)); }

  /// Multiplies the polar radius by exp(-shift); the log-radius drops by `shift`.
  EllipseParams shifted_log(double shift) const {
    const double s = std::exp(2.0 * shift);
    return {s * t_.a, s * t_.b, s * t_.c};
  }

  friend bool operator==(const EllipseParams&, const EllipseParams&) = default;

 private:
  TrigTriple t_;
};

inline double rho_eval(const EllipseParams& e, double phi) { return e.rho(phi); }
inline double log_rho_eval(const EllipseParams& e, double phi) { return e.log_rho(phi); }

/// Standard form R = a + b' cos 2(phi - theta), a > b' >= 0, theta in [0, pi).
struct StdEllipseParams {
  double a = 1.0;
  double bprime = 0.0;
  double theta = 0.0;
};

inline StdEllipseParams to_standard(const EllipseParams& e) {
  const double bprime = std::hypot(e.b2(), e.c2());
  const double theta = bprime == 0.0 ? 0.0 : reduce_half_turn(0.5 * std::atan2(e.c2(), e.b2()));
  return {e.a2(), bprime, theta};
}

inline EllipseParams from_standard(const StdEllipseParams& s) {
  return {s.a, s.bprime * std::cos(2.0 * s.theta), s.bprime * std::sin(2.0 * s.theta)};
}

/// Symmetric positive-definite 2x2 matrix [[m11, m12], [m12, m22]].
class PDMatrix2 {
 public:
  PDMatrix2(double m11, double m12, double m22) : m11_(m11), m12_(m12), m22_(m22) {
    if (!(std::isfinite(m11) && std::isfinite(m12) && std::isfinite(m22)) || !(m11 > 0.0) ||
        !(m11 * m22 - m12 * m12 > 0.0)) {
      throw Error(ErrorCode::NotPD, "matrix is not positive definite");
    }
  }

  static PDMatrix2 identity() { return {1.0, 0.0, 1.0}; }

  double m11() const { return m11_; }
  double m12() const { return m12_; }
  double m22() const { return m22_; }
  double det() const { return m11_ * m22_ - m12_ * m12_; }
  double trace() const { return m11_ + m22_; }

  Vec2 apply(Vec2 v) const { return {m11_ * v.x + m12_ * v.y, m12_ * v.x + m22_ * v.y}; }

  PDMatrix2 inverse() const {
    const double d = det();
    return {m22_ / d, -m12_ / d, m11_ / d};
  }

  /// Square of a symmetric matrix is symmetric.
  PDMatrix2 squared() const {
    return {m11_ * m11_ + m12_ * m12_, m12_ * (m11_ + m22_), m12_ * m12_ + m22_ * m22_};
  }

  PDMatrix2 scaled(double s) const { return {s * m11_, s * m12_, s * m22_}; }

  /// Spectral norm (largest eigenvalue).
  double norm() const {
    const double half_trace = 0.5 * trace();
    return half_trace + std::sqrt(std::max(0.0, half_trace * half_trace - det()));
  }

  friend bool operator==(const PDMatrix2&, const PDMatrix2&) = default;

 private:
  double m11_, m12_, m22_;
};

/// Closed-form principal square root: (S + sqrt(det) I) / sqrt(trace + 2 sqrt(det)).
inline PDMatrix2 pd_sqrt(const PDMatrix2& s) {
  const double root_det = std::sqrt(s.det());
  const double scale = 1.0 / std::sqrt(s.trace() + 2.0 * root_det);
  return {(s.m11() + root_det) * scale, s.m12() * scale, (s.m22() + root_det) * scale};
}

inline PDMatrix2 pd_sqrt_inverse(const PDMatrix2& s) { return pd_sqrt(s).inverse(); }

/// Quadratic-form matrix [[a1, b1], [b1, c1]] of the ellipse x^T M x = 1.
inline PDMatrix2 quadratic_form(const EllipseParams& e) {
  return {e.a2() + e.b2(), e.c2(), e.a2() - e.b2()};
}

/// The PD operator mapping the unit circle onto the ellipse.
inline PDMatrix2 params_to_matrix(const EllipseParams& e) { return pd_sqrt_inverse(quadratic_form(e)); }

inline EllipseParams matrix_to_params(const PDMatrix2& t) {
  const PDMatrix2 m = t.inverse().squared();
  return {0.5 * (m.m11() + m.m22()), 0.5 * (m.m11() - m.m22()), m.m12()};
}

// Interpolation in the trigonometric family.

inline linalg::Matrix<3> three_point_matrix(double phi1, double phi2, double phi3) {
  linalg::Matrix<3> m{};
  const std::array<double, 3> phis{phi1, phi2, phi3};
  for (std::size_t i = 0; i < 3; ++i) {
    m[i] = {1.0, std::cos(2.0 * phis[i]), std::sin(2.0 * phis[i])};
  }
  return m;
}

/// Closed form of det(three_point_matrix).
inline double three_point_determinant(double phi1, double phi2, double phi3) {
  return 4.0 * std::sin(phi2 - phi1) * std::sin(phi3 - phi1) * std::sin(phi3 - phi2);
}

/// Rows: value at phi1, derivative at phi1, value at phi2.
inline linalg::Matrix<3> tangent_matrix(double phi1, double phi2) {
  return {{{1.0, std::cos(2.0 * phi1), std::sin(2.0 * phi1)},
           {0.0, -2.0 * std::sin(2.0 * phi1), 2.0 * std::cos(2.0 * phi1)},
           {1.0, std::cos(2.0 * phi2), std::sin(2.0 * phi2)}}};
}

inline double tangent_determinant(double phi1, double phi2) {
  const double s = std::sin(phi2 - phi1);
  return 4.0 * s * s;
}

/// Solves for the unique triple with a + b cos 2phi_i + c sin 2phi_i = R_i.
/// The result may lie outside the cone; check `in_cone()` before use.
inline TrigTriple interpolate_three_points(double phi1, double phi2, double phi3, double r1,
                                           double r2, double r3) {
  if (!(phi1 < phi2 && phi2 < phi3 && phi3 < phi1 + pi)) {
    throw Error(ErrorCode::BadAngleOrder, "need phi1 < phi2 < phi3 < phi1 + pi");
  }
  const auto x = linalg::solve<3>(three_point_matrix(phi1, phi2, phi3), {r1, r2, r3});
  if (!x) throw Error(ErrorCode::BadAngleOrder, "interpolation nodes coincide numerically");
  return {(*x)[0], (*x)[1], (*x)[2]};
}

/// Matches value r1 and derivative r1p of the trig form at phi1, and value r2 at phi2.
inline TrigTriple interpolate_tangent(double phi1, double r1, double r1p, double phi2, double r2) {
  const double gap = std::abs(phi1 - phi2);
  if (!(gap > 0.0 && gap < pi)) {
    throw Error(ErrorCode::BadAngleOrder, "need 0 < |phi1 - phi2| < pi");
  }
  const auto x = linalg::solve<3>(tangent_matrix(phi1, phi2), {r1, r1p, r2});
  if (!x) throw Error(ErrorCode::BadAngleOrder, "interpolation nodes coincide numerically");
  return {(*x)[0], (*x)[1], (*x)[2]};
}

/// g' = -(1/2) R' / R for g = -(1/2) log R.
inline double log_derivative_from_trig(double trig_value, double trig_derivative) {
  return -0.5 * trig_derivative / trig_value;
}

inline double trig_derivative_from_log(double trig_value, double log_derivative) {
  return -2.0 * log_derivative * trig_value;
}

/// Moves log rho down by t at the midpoint of [alpha, beta] while keeping it fixed
/// at alpha and beta. The result lies below the original on (alpha, beta) and
/// above it on (beta, alpha + pi).
inline EllipseParams perturb(const EllipseParams& e, double alpha, double beta, double t) {
  if (!(alpha < beta && beta < alpha + pi)) {
    throw Error(ErrorCode::BadAngleOrder, "need alpha < beta < alpha + pi");
  }
  if (!std::isfinite(t)) throw Error(ErrorCode::InvalidInput, "perturbation size must be finite");
  if (t == 0.0) return e;
  const double gamma = 0.5 * (alpha + beta);
  const TrigTriple moved = interpolate_three_points(alpha, gamma, beta, e.trig(alpha),
                                                    std::exp(2.0 * t) * e.trig(gamma), e.trig(beta));
  if (!moved.in_cone()) {
    throw Error(ErrorCode::LeftCone, "perturbation of size " + std::to_string(t) + " leaves the cone");
  }
  return EllipseParams(moved);
}

}  // namespace bmd
