#pragma once

// Best uniform approximation of f = log r by log-radii of origin-centred ellipses.
//
// For a fixed defect d the condition |f - g| <= d on a grid is linear in the
// ellipse triple (a, b, c):
//   exp(-2d - 2f) <= a + b cos 2phi + c sin 2phi <= exp(2d - 2f),
// so feasibility is a small LP and the optimal defect is found by bisection.
// A Remez-style exchange then removes the grid bias, and the result is
// certified by four alternating extremal points.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bmd/angle.hpp"
#include "bmd/ellipse.hpp"
#include "bmd/error.hpp"
#include "bmd/gauge.hpp"
#include "bmd/linalg.hpp"
#include "bmd/seidel_lp.hpp"

namespace bmd {

struct SolverOptions {
  int grid_size = 4096;  // angles per half-turn
  double bisect_tol = 1e-12;
  int max_bisect = 80;
  bool refine = true;
  bool polish = true;
  double cert_tol = 1e-8;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;

  void validate() const {
    if (grid_size < 64) throw Error(ErrorCode::InvalidInput, "grid_size must be at least 64");
    if (!(bisect_tol > 0.0) || !(cert_tol > 0.0)) {
      throw Error(ErrorCode::InvalidInput, "tolerances must be positive");
    }
    if (max_bisect < 1) throw Error(ErrorCode::InvalidInput, "max_bisect must be positive");
  }
};

/// Sorted angles in [0, pi): a uniform grid merged with the gauge's breakpoints,
/// together with f = log r at each of them.
struct AngleGrid {
  std::vector<double> angles;
  std::vector<double> log_radius;

  std::size_t size() const { return angles.size(); }
};

inline AngleGrid make_grid(const Gauge& gauge, int size) {
  if (size < 1) throw Error(ErrorCode::EmptyGrid, "grid needs at least one angle");
  AngleGrid grid;
  grid.angles.reserve(static_cast<std::size_t>(size));
  for (int k = 0; k < size; ++k) grid.angles.push_back(pi * k / size);
  const auto kinks = gauge.breakpoints();
  grid.angles.insert(grid.angles.end(), kinks.begin(), kinks.end());
  std::sort(grid.angles.begin(), grid.angles.end());
  const double min_gap = 1e-9 * pi / size;
  grid.angles.erase(std::unique(grid.angles.begin(), grid.angles.end(),
                                [min_gap](double a, double b) { return b - a < min_gap; }),
                    grid.angles.end());
  grid.log_radius.reserve(grid.angles.size());
  for (double a : grid.angles) grid.log_radius.push_back(gauge.log_radius(a));
  return grid;
}

/// f - g at phi for g = log rho of `params`.
inline double deviation(const Gauge& gauge, const EllipseParams& params, double phi) {
  return gauge.log_radius(phi) + 0.5 * std::log(params.trig(phi));
}

// ---------------------------------------------------------------------------
// Feasibility subproblem

struct MarginSolution {
  TrigTriple triple;
  double margin = 0.0;
};

/// Maximizes m subject to lower_k + m <= R(phi_k) <= upper_k - m over the grid.
inline MarginSolution max_margin(const AngleGrid& grid, double d, std::uint64_t seed) {
  using lp::HalfSpace;
  std::vector<HalfSpace<4>> rows;
  rows.reserve(2 * grid.size());
  double bound = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double c = std::cos(2.0 * grid.angles[k]);
    const double s = std::sin(2.0 * grid.angles[k]);
    const double lower = std::exp(-2.0 * d - 2.0 * grid.log_radius[k]);
    const double upper = std::exp(2.0 * d - 2.0 * grid.log_radius[k]);
    rows.push_back({{-1.0, -c, -s, 1.0}, -lower});
    rows.push_back({{1.0, c, s, 1.0}, upper});
    bound = std::max(bound, upper);
  }
  lp::shuffle(rows, seed);
  const auto objectives = lp::with_coordinate_tiebreak<4>({0.0, 0.0, 0.0, 1.0});
  lp::Box<4> box;
  box.lower.fill(-2.0 * bound);
  box.upper.fill(2.0 * bound);
  const auto x = lp::maximize<4>(rows, objectives, box);
  if (!x) return {{0.0, 0.0, 0.0}, -std::numeric_limits<double>::infinity()};
  return {{(*x)[0], (*x)[1], (*x)[2]}, (*x)[3]};
}

struct FeasiblePoint {
  EllipseParams params;
  double margin;
};

/// An ellipse with |f - g| <= d on every grid angle, if one exists.
inline std::optional<FeasiblePoint> feasible_at(const AngleGrid& grid, double d, std::uint64_t seed) {
  const MarginSolution sol = max_margin(grid, d, seed);
  // Rounding in the LP can leave an exactly feasible problem a hair negative.
  const double scale = std::exp(2.0 * d) * std::abs(sol.triple.a);
  if (!(sol.margin >= -1e-14 * scale)) return std::nullopt;
  const TrigTriple& t = sol.triple;
  if (!(t.a > 0.0) || !(std::hypot(t.b, t.c) < t.a * (1.0 - 1e-12))) return std::nullopt;
  return FeasiblePoint{EllipseParams(t), std::max(sol.margin, 0.0)};
}

inline std::optional<FeasiblePoint> feasible_at(const Gauge& gauge, double d, const AngleGrid& grid,
                                                std::uint64_t seed = SolverOptions{}.seed) {
  (void)gauge;  // the grid already carries f
  return feasible_at(grid, d, seed);
}

// ---------------------------------------------------------------------------
// Extrema of the deviation

struct LocalExtremum {
  double angle = 0.0;  // in [0, pi)
  double value = 0.0;  // f - g at angle
  bool is_max = true;
};

namespace detail {

/// Golden-section search for the maximum of sign * (f - g) on [lo, hi].
inline LocalExtremum golden_refine(const Gauge& gauge, const EllipseParams& params, double lo, double hi,
                                   double start_angle, double start_value, bool is_max) {
  const double sign = is_max ? 1.0 : -1.0;
  const auto h = [&](double x) { return sign * deviation(gauge, params, x); };
  constexpr double inv_phi = 0.6180339887498949;
  double best_x = start_angle;
  double best = sign * start_value;
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double h1 = h(x1);
  double h2 = h(x2);
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
    if (h1 >= h2) {
      b = x2;
      x2 = x1;
      h2 = h1;
      x1 = b - inv_phi * (b - a);
      h1 = h(x1);
    } else {
      a = x1;
      x1 = x2;
      h1 = h2;
      x2 = a + inv_phi * (b - a);
      h2 = h(x2);
    }
  }
  for (auto [x, v] : {std::pair{x1, h1}, std::pair{x2, h2}}) {
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return {reduce_half_turn(best_x), sign * best, is_max};
}

}  // namespace detail

/// Deviation f - g on every grid angle.
inline std::vector<double> grid_deviation(const AngleGrid& grid, const EllipseParams& params) {
  std::vector<double> e(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    e[k] = grid.log_radius[k] + 0.5 * std::log(params.trig(grid.angles[k]));
  }
  return e;
}

/// Local maxima and minima of f - g, located on the grid and refined between
/// the neighbouring grid angles. Unless `all` is set, only maxima near the
/// largest value and minima near the smallest are kept.
inline std::vector<LocalExtremum> local_extrema(const Gauge& gauge, const EllipseParams& params,
                                                const AngleGrid& grid, bool all = false) {
  const std::vector<double> e = grid_deviation(grid, params);
  const std::size_t n = e.size();
  double max_jump = 0.0;
  for (std::size_t k = 0; k < n; ++k) max_jump = std::max(max_jump, std::abs(e[(k + 1) % n] - e[k]));
  const auto [lowest, highest] = std::minmax_element(e.begin(), e.end());
  // Refinement cannot move a value by more than about one grid step.
  const double slack = 2.0 * max_jump + 1e-12;
  const double max_floor = all ? -std::numeric_limits<double>::infinity() : *highest - slack;
  const double min_ceiling = all ? std::numeric_limits<double>::infinity() : *lowest + slack;

  std::vector<LocalExtremum> out;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t prev = (k + n - 1) % n;
    const std::size_t next = (k + 1) % n;
    const bool is_max = e[k] >= e[prev] && e[k] > e[next];
    const bool is_min = e[k] <= e[prev] && e[k] < e[next];
    if (!(is_max && e[k] >= max_floor) && !(is_min && e[k] <= min_ceiling)) continue;
    double lo = grid.angles[prev];
    double hi = grid.angles[next];
    if (prev > k) lo -= pi;
    if (next < k) hi += pi;
    out.push_back(detail::golden_refine(gauge, params, lo, hi, grid.angles[k], e[k], is_max));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.angle < b.angle; });
  return out;
}

/// max |f - g|; with `refine`, local extrema are refined beyond the grid.
inline double sup_norm(const Gauge& gauge, const EllipseParams& params, const AngleGrid& grid,
                       bool refine = true) {
  double sup = 0.0;
  for (double v : grid_deviation(grid, params)) sup = std::max(sup, std::abs(v));
  if (refine) {
    for (const auto& x : local_extrema(gauge, params, grid)) sup = std::max(sup, std::abs(x.value));
  }
  return sup;
}

// ---------------------------------------------------------------------------
// Alternance certificate

struct AlternanceCertificate {
  double phi1 = 0.0;
  double psi1 = pi / 4.0;
  double phi2 = pi / 2.0;
  double psi2 = 3.0 * pi / 4.0;
  /// Deviation of |f - g| from the defect at phi1, psi1, phi2, psi2 (in that order).
  std::array<double, 4> residuals{};
  /// The defect the certificate attests to.
  double defect = 0.0;

  std::array<double, 4> angles() const { return {phi1, psi1, phi2, psi2}; }
};

inline bool strictly_interleaved(const AlternanceCertificate& c) {
  return c.phi1 < c.psi1 && c.psi1 < c.phi2 && c.phi2 < c.psi2 && c.psi2 < c.phi1 + pi;
}

namespace detail {

inline AlternanceCertificate with_residuals(const Gauge& gauge, const EllipseParams& params,
                                            AlternanceCertificate cert, double defect) {
  cert.defect = defect;
  const auto a = cert.angles();
  for (std::size_t i = 0; i < 4; ++i) {
    const double sign = i % 2 == 0 ? 1.0 : -1.0;
    cert.residuals[i] = sign * deviation(gauge, params, a[i]) - defect;
  }
  return cert;
}

}  // namespace detail

/// Four alternating extremal points of f - g for (near-)optimal `params`.
inline AlternanceCertificate extract_certificate(const Gauge& gauge, const EllipseParams& params, double tol,
                                                 const AngleGrid& grid) {
  const auto extrema = local_extrema(gauge, params, grid);
  double defect = 0.0;
  for (double v : grid_deviation(grid, params)) defect = std::max(defect, std::abs(v));
  for (const auto& x : extrema) defect = std::max(defect, std::abs(x.value));

  if (defect < tol) return detail::with_residuals(gauge, params, AlternanceCertificate{}, defect);

  std::vector<LocalExtremum> above;
  std::vector<LocalExtremum> below;
  for (const auto& x : extrema) {
    if (x.is_max && x.value >= defect - tol) above.push_back(x);
    if (!x.is_max && -x.value >= defect - tol) below.push_back(x);
  }
  if (above.empty() || below.empty()) {
    throw Error(ErrorCode::NoAlternance, "the deviation does not reach the defect on both sides");
  }

  // `above` is sorted, so phi1 is the first maximizer in [0, pi).
  const double phi1 = above.front().angle;
  const double edge = 1e-12;
  std::optional<double> psi1, psi2;
  for (const auto& x : below) {
    const double a = in_window(x.angle, phi1);
    if (a - phi1 <= edge || a - phi1 >= pi - edge) continue;
    if (!psi1 || a < *psi1) psi1 = a;
    if (!psi2 || a > *psi2) psi2 = a;
  }
  if (!psi1 || !(*psi1 < *psi2)) {
    throw Error(ErrorCode::NoAlternance, "fewer than two minimizers between consecutive maximizers");
  }
  std::optional<LocalExtremum> second;
  for (const auto& x : above) {
    const double a = in_window(x.angle, phi1);
    if (a > *psi1 && a < *psi2 && (!second || x.value > second->value)) second = LocalExtremum{a, x.value, true};
  }
  if (!second) throw Error(ErrorCode::NoAlternance, "no maximizer between the outer minimizers");

  AlternanceCertificate cert;
  cert.phi1 = phi1;
  cert.psi1 = *psi1;
  cert.phi2 = second->angle;
  cert.psi2 = *psi2;
  return detail::with_residuals(gauge, params, cert, defect);
}

inline AlternanceCertificate extract_certificate(const Gauge& gauge, const EllipseParams& params, double tol) {
  return extract_certificate(gauge, params, tol, make_grid(gauge, SolverOptions{}.grid_size));
}

struct CertificateVerdict {
  bool interleaved = false;
  std::array<bool, 4> residual_ok{};
  bool sup_norm_ok = false;
  double sup_norm = 0.0;

  bool passed() const {
    return interleaved && sup_norm_ok &&
           std::all_of(residual_ok.begin(), residual_ok.end(), [](bool b) { return b; });
  }
  std::string describe() const {
    std::string s = std::string("interleaving: ") + (interleaved ? "pass" : "FAIL");
    const char* names[] = {"phi1", "psi1", "phi2", "psi2"};
    for (std::size_t i = 0; i < 4; ++i) {
      s += std::string("; residual ") + names[i] + ": " + (residual_ok[i] ? "pass" : "FAIL");
    }
    s += std::string("; sup-norm: ") + (sup_norm_ok ? "pass" : "FAIL");
    return s;
  }
};

/// Re-evaluates the alternance conditions for `params`; stored residuals are ignored.
inline CertificateVerdict verify_certificate(const Gauge& gauge, const EllipseParams& params,
                                             const AlternanceCertificate& cert, double tol, const AngleGrid& grid) {
  CertificateVerdict v;
  v.interleaved = strictly_interleaved(cert);
  const auto a = cert.angles();
  for (std::size_t i = 0; i < 4; ++i) {
    const double sign = i % 2 == 0 ? 1.0 : -1.0;
    v.residual_ok[i] = std::abs(sign * deviation(gauge, params, a[i]) - cert.defect) <= tol;
  }
  v.sup_norm = sup_norm(gauge, params, grid, true);
  v.sup_norm_ok = v.sup_norm <= cert.defect + tol;
  return v;
}

inline CertificateVerdict verify_certificate(const Gauge& gauge, const EllipseParams& params,
                                             const AlternanceCertificate& cert, double tol) {
  return verify_certificate(gauge, params, cert, tol, make_grid(gauge, SolverOptions{}.grid_size));
}

// ---------------------------------------------------------------------------
// Remez-style polish

namespace detail {

struct Reference {
  std::array<double, 4> angle{};
  std::array<double, 4> sign{};  // +1 where f - g = +d, -1 where f - g = -d
};

struct Levelled {
  EllipseParams params;
  double level;
};

// Newton on f(t_i) + (1/2) log R(t_i) = sign_i * d in the unknowns (a, b, c, d).
inline std::optional<Levelled> equioscillate(const Gauge& gauge, const Reference& ref, const EllipseParams& start,
                                             double start_level) {
  std::array<double, 4> f{};
  for (std::size_t i = 0; i < 4; ++i) f[i] = gauge.log_radius(ref.angle[i]);
  const auto residual = [&](const TrigTriple& t, double level, linalg::Vector<4>& out) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      out[i] = f[i] + 0.5 * std::log(t.value(ref.angle[i])) - ref.sign[i] * level;
      worst = std::max(worst, std::abs(out[i]));
    }
    return worst;
  };

  TrigTriple t = start.triple();
  double level = start_level;
  linalg::Vector<4> r{};
  double err = residual(t, level, r);
  for (int it = 0; it < 50 && err > 1e-15; ++it) {
    linalg::Matrix<4> jac{};
    for (std::size_t i = 0; i < 4; ++i) {
      const double two_r = 2.0 * t.value(ref.angle[i]);
      jac[i] = {1.0 / two_r, std::cos(2.0 * ref.angle[i]) / two_r, std::sin(2.0 * ref.angle[i]) / two_r,
                -ref.sign[i]};
    }
    linalg::Vector<4> rhs{-r[0], -r[1], -r[2], -r[3]};
    const auto step = linalg::solve<4>(jac, rhs);
    if (!step) return std::nullopt;
    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving, lambda *= 0.5) {
      const TrigTriple trial{t.a + lambda * (*step)[0], t.b + lambda * (*step)[1], t.c + lambda * (*step)[2]};
      if (!trial.in_cone()) continue;
      linalg::Vector<4> trial_r{};
      const double trial_level = level + lambda * (*step)[3];
      const double trial_err = residual(trial, trial_level, trial_r);
      if (trial_err < err || (trial_err <= err * (1.0 + 1e-12) && lambda == 1.0)) {
        t = trial;
        level = trial_level;
        r = trial_r;
        err = trial_err;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (err > 1e-9 || !t.in_cone()) return std::nullopt;
  return Levelled{EllipseParams(t), level};
}

// Moves each reference point to the strongest same-sign extremum between its
// neighbours, then swaps in the global extremum if it is not yet referenced.
// Both steps keep the signs alternating around the half-turn.
inline Reference exchange_reference(Reference ref, const std::vector<LocalExtremum>& extrema) {
  for (std::size_t i = 0; i < 4; ++i) {
    const double lo = i == 0 ? ref.angle[3] - pi : ref.angle[i - 1];
    const double hi = i == 3 ? ref.angle[0] + pi : ref.angle[i + 1];
    std::optional<double> best_angle;
    double best_value = 0.0;
    for (const auto& x : extrema) {
      if (x.is_max != (ref.sign[i] > 0.0)) continue;
      const double a = in_window(x.angle, lo);
      if (!(a > lo && a < hi)) continue;
      const double v = ref.sign[i] * x.value;
      if (!best_angle || v > best_value) {
        best_value = v;
        best_angle = a;
      }
    }
    if (best_angle) ref.angle[i] = *best_angle;
  }

  const LocalExtremum* global = nullptr;
  for (const auto& x : extrema) {
    if (!global || std::abs(x.value) > std::abs(global->value)) global = &x;
  }
  if (!global) return ref;
  const double a = in_window(global->angle, ref.angle[0]);
  for (double r : ref.angle) {
    if (half_turn_distance(r, a) < 1e-12) return ref;
  }
  std::size_t j = 0;
  while (j < 3 && !(a > ref.angle[j] && a < ref.angle[j + 1])) ++j;
  const double s = global->value >= 0.0 ? 1.0 : -1.0;
  if (ref.sign[j] == s) {
    ref.angle[j] = a;
  } else if (j < 3) {
    ref.angle[j + 1] = a;
  } else {
    ref.angle[0] = a - pi;
  }
  return ref;
}

inline bool alternates(const Reference& ref) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (ref.sign[i] == ref.sign[(i + 1) % 4]) return false;
  }
  return ref.angle[0] < ref.angle[1] && ref.angle[1] < ref.angle[2] && ref.angle[2] < ref.angle[3] &&
         ref.angle[3] < ref.angle[0] + pi;
}

// Initial reference: the global maximizer followed by the next three
// alternating extrema, preferring the largest in each run of equal signs.
inline std::optional<Reference> initial_reference(const std::vector<LocalExtremum>& extrema) {
  if (extrema.size() < 4) return std::nullopt;
  std::vector<LocalExtremum> runs;
  for (const auto& x : extrema) {
    if (!runs.empty() && runs.back().is_max == x.is_max) {
      if (std::abs(x.value) > std::abs(runs.back().value)) runs.back() = x;
    } else {
      runs.push_back(x);
    }
  }
  if (runs.size() > 1 && runs.front().is_max == runs.back().is_max) {
    if (std::abs(runs.back().value) > std::abs(runs.front().value)) runs.front() = runs.back();
    runs.pop_back();
  }
  if (runs.size() < 4) return std::nullopt;
  std::size_t start = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (std::abs(runs[i].value) > std::abs(runs[start].value)) start = i;
  }
  Reference ref;
  const double origin = runs[start].angle;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& x = runs[(start + i) % runs.size()];
    ref.angle[i] = in_window(x.angle, origin);
    ref.sign[i] = x.is_max ? 1.0 : -1.0;
  }
  if (!alternates(ref)) return std::nullopt;
  return ref;
}

struct PolishResult {
  EllipseParams params;
  double defect;
  int iterations;
};

inline std::optional<PolishResult> remez_polish(const Gauge& gauge, const AngleGrid& grid,
                                                const EllipseParams& start, double start_defect, double tol) {
  auto extrema = local_extrema(gauge, start, grid);
  auto ref = initial_reference(extrema);
  if (!ref) return std::nullopt;

  std::optional<PolishResult> best;
  EllipseParams current = start;
  double level = start_defect;
  int stalled = 0;
  for (int it = 1; it <= 60; ++it) {
    const auto solved = equioscillate(gauge, *ref, current, level);
    if (!solved || solved->level <= 0.0) break;
    current = solved->params;
    level = solved->level;
    extrema = local_extrema(gauge, current, grid);
    double sup = 0.0;
    for (double v : grid_deviation(grid, current)) sup = std::max(sup, std::abs(v));
    for (const auto& x : extrema) sup = std::max(sup, std::abs(x.value));

    if (!best || sup < best->defect) {
      best = PolishResult{current, sup, it};
      stalled = 0;
    } else if (++stalled >= 4) {
      break;
    }
    if (sup - level <= 1e-3 * tol) break;
    const Reference next = exchange_reference(*ref, extrema);
    if (!alternates(next)) break;
    ref = next;
  }
  return best;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Uniform and one-sided solutions

struct SolverDiagnostics {
  int bisect_iterations = 0;
  double bracket_width = 0.0;
  double grid_defect = 0.0;
  double lp_margin = 0.0;
  int remez_iterations = 0;
  bool polished = false;
  double certificate_tol = 0.0;
  std::size_t grid_points = 0;
};

struct UniformSolution {
  EllipseParams params;
  double defect;
  AlternanceCertificate certificate;
  SolverDiagnostics diagnostics;
};

inline UniformSolution solve_uniform(const Gauge& gauge, const SolverOptions& opts = {}) {
  opts.validate();
  const AngleGrid grid = make_grid(gauge, opts.grid_size);
  const auto [fmin, fmax] = std::minmax_element(grid.log_radius.begin(), grid.log_radius.end());

  SolverDiagnostics diag;
  diag.grid_points = grid.size();

  // The best circle attains half the oscillation of f, so that level is feasible.
  double lo = 0.0;
  double hi = 0.5 * (*fmax - *fmin);
  std::optional<FeasiblePoint> best = feasible_at(grid, 0.0, opts.seed);
  if (best) {
    hi = 0.0;
  } else {
    hi = hi * (1.0 + 1e-9) + 1e-15;
    best = feasible_at(grid, hi, opts.seed);
    for (int grow = 0; !best && grow < 60; ++grow) {
      hi = 2.0 * hi + 1e-12;
      best = feasible_at(grid, hi, opts.seed);
    }
    if (!best) throw Error(ErrorCode::NoConvergence, "no feasible defect found");
    while (hi - lo > opts.bisect_tol && diag.bisect_iterations < opts.max_bisect) {
      const double mid = 0.5 * (lo + hi);
      ++diag.bisect_iterations;
      if (auto p = feasible_at(grid, mid, opts.seed)) {
        hi = mid;
        best = p;
      } else {
        lo = mid;
      }
    }
    if (hi - lo > opts.bisect_tol) {
      throw Error(ErrorCode::NoConvergence, "bisection bracket " + std::to_string(hi - lo) + " after " +
                                                std::to_string(diag.bisect_iterations) + " steps");
    }
  }
  diag.bracket_width = hi - lo;
  diag.lp_margin = best->margin;

  EllipseParams params = best->params;
  diag.grid_defect = sup_norm(gauge, params, grid, false);
  const double refined = sup_norm(gauge, params, grid, true);
  double defect = opts.refine || opts.polish ? refined : diag.grid_defect;

  double cert_tol = opts.cert_tol;
  if (opts.polish && defect > opts.cert_tol) {
    if (auto polished = detail::remez_polish(gauge, grid, params, defect, opts.cert_tol)) {
      if (polished->defect < defect) {
        params = polished->params;
        defect = polished->defect;
        diag.polished = true;
        diag.remez_iterations = polished->iterations;
      }
    }
  }
  if (!diag.polished) {
    // Without the exchange step the grid solution only equioscillates up to the
    // discretization gap between the grid and the refined sup-norm.
    cert_tol += 2.0 * std::max(0.0, refined - diag.grid_defect);
  }
  diag.certificate_tol = cert_tol;

  AlternanceCertificate cert = extract_certificate(gauge, params, cert_tol, grid);
  return {params, cert.defect, cert, diag};
}

struct OneSidedSolution {
  EllipseParams params;
  /// max (f - g) for the shifted g; twice the uniform defect.
  double value;
  /// max (g - f); zero up to rounding since g <= f.
  double max_violation;
};

inline OneSidedSolution to_one_sided(const Gauge& gauge, const UniformSolution& sol, const AngleGrid& grid) {
  const EllipseParams inscribed = sol.params.shifted_log(sol.defect);
  double value = -std::numeric_limits<double>::infinity();
  double violation = -std::numeric_limits<double>::infinity();
  for (double v : grid_deviation(grid, inscribed)) {
    value = std::max(value, v);
    violation = std::max(violation, -v);
  }
  for (const auto& x : local_extrema(gauge, inscribed, grid, false)) {
    value = std::max(value, x.value);
    violation = std::max(violation, -x.value);
  }
  return {inscribed, value, violation};
}

inline OneSidedSolution to_one_sided(const Gauge& gauge, const UniformSolution& sol) {
  return to_one_sided(gauge, sol, make_grid(gauge, SolverOptions{}.grid_size));
}

/// Banach-Mazur distance to the Euclidean plane: exp(2 * defect).
inline double distance(const Gauge& gauge, const SolverOptions& opts = {}) {
  return std::exp(2.0 * solve_uniform(gauge, opts).defect);
}

}  // namespace bmd
