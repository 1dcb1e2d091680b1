#pragma once

// Brute-force reference for the uniform ellipse fit.
//
// Evaluates max |f - g| over a parameter grid in the standard chart
// (a, b', theta), then zooms into the best cell with a Cartesian grid in
// (a2, b2, c2). The objective is quasiconvex in (a2, b2, c2) (its sublevel sets
// are cut out by linear inequalities), which keeps the zoom on track.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "bmd/angle.hpp"
#include "bmd/ellipse.hpp"
#include "bmd/error.hpp"
#include "bmd/gauge.hpp"

namespace bmd {

struct OracleGrid {
  int n_a = 200;
  int n_b = 200;
  int n_theta = 64;
  int n_phi = 2048;
  /// Search interval for a; derived from the range of r when empty.
  std::optional<std::pair<double, double>> a_range;
  /// Cap on (triple, angle) evaluations over both stages.
  double max_evaluations = 1e9;
  /// Adds the gauge's non-smooth angles to the angle grid.
  bool include_breakpoints = true;
  /// Points within this value of the best count towards `near_optimal_radius`.
  double cluster_delta = 1e-3;
  int threads = 1;

  void validate() const {
    if (n_a < 8 || n_b < 8 || n_theta < 8 || n_phi < 8) {
      throw Error(ErrorCode::EmptyGrid, "oracle grid resolutions must be at least 8");
    }
    if (a_range && !(a_range->first > 0.0 && a_range->first < a_range->second && std::isfinite(a_range->second))) {
      throw Error(ErrorCode::EmptyGrid, "a_range must be a nonempty positive interval");
    }
    if (!(max_evaluations > 0.0) || threads < 1) throw Error(ErrorCode::InvalidInput, "bad oracle budget");
  }
};

struct OracleResult {
  StdEllipseParams best;
  double value = 0.0;
  /// Largest distance in (a2, b2, c2), relative to a2 of the best point, from
  /// the best first-stage point to any first-stage point within
  /// `cluster_delta` of the best value. Shrinks with the delta when the
  /// minimizer is unique.
  double near_optimal_radius = 0.0;
  std::uint64_t evaluations = 0;
  int zoom_levels = 0;

  EllipseParams params() const { return from_standard(best); }
};

/// max |f - g| over phi_k = k pi / n_phi; a lower bound on the sup-norm.
inline double oracle_value(const Gauge& gauge, const EllipseParams& params, int n_phi) {
  if (n_phi < 1) throw Error(ErrorCode::EmptyGrid, "need at least one angle");
  double worst = 0.0;
  for (int k = 0; k < n_phi; ++k) {
    const double phi = pi * k / n_phi;
    worst = std::max(worst, std::abs(std::log(gauge.radius(phi)) - std::log(params.rho(phi))));
  }
  return worst;
}

struct OracleBounds {
  double lower;
  double modulus;  // max |e_{k+1} - e_k| / h over the grid
  double upper;    // lower + modulus * pi / n_phi
};

inline OracleBounds oracle_value_bounds(const Gauge& gauge, const EllipseParams& params, int n_phi) {
  if (n_phi < 2) throw Error(ErrorCode::EmptyGrid, "need at least two angles");
  const double h = pi / n_phi;
  std::vector<double> e(static_cast<std::size_t>(n_phi));
  for (int k = 0; k < n_phi; ++k) {
    const double phi = pi * k / n_phi;
    e[static_cast<std::size_t>(k)] = std::log(gauge.radius(phi)) - std::log(params.rho(phi));
  }
  double lower = 0.0;
  double modulus = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    lower = std::max(lower, std::abs(e[k]));
    modulus = std::max(modulus, std::abs(e[(k + 1) % e.size()] - e[k]) / h);
  }
  return {lower, modulus, lower + modulus * h};
}

namespace detail {

// With q = r^2 R, |f - g| = |log q| / 2, so the sup-norm only needs the
// extremes of q over the angle grid.
class OracleObjective {
 public:
  OracleObjective(const Gauge& gauge, int n_phi, bool include_breakpoints) {
    std::vector<double> angles;
    for (int k = 0; k < n_phi; ++k) angles.push_back(pi * k / n_phi);
    if (include_breakpoints) {
      const auto kinks = gauge.breakpoints();
      angles.insert(angles.end(), kinks.begin(), kinks.end());
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
    for (double phi : angles) {
      const double r = gauge.radius(phi);
      r2_.push_back(r * r);
      r2c_.push_back(r * r * std::cos(2.0 * phi));
      r2s_.push_back(r * r * std::sin(2.0 * phi));
      log_r_min_ = std::min(log_r_min_, std::log(r));
      log_r_max_ = std::max(log_r_max_, std::log(r));
    }
  }

  std::size_t size() const { return r2_.size(); }
  double log_r_min() const { return log_r_min_; }
  double log_r_max() const { return log_r_max_; }

  double operator()(double a, double b, double c) const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    const std::size_t n = r2_.size();
    for (std::size_t k = 0; k < n; ++k) {
      const double q = a * r2_[k] + b * r2c_[k] + c * r2s_[k];
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
    return 0.5 * std::max(std::log(hi), -std::log(lo));
  }

 private:
  std::vector<double> r2_, r2c_, r2s_;
  double log_r_min_ = std::numeric_limits<double>::infinity();
  double log_r_max_ = -std::numeric_limits<double>::infinity();
};

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  std::size_t index = std::numeric_limits<std::size_t>::max();

  bool better_than(const Candidate& o) const {
    return value < o.value || (value == o.value && index < o.index);
  }
};

/// Evaluates `count` points split into contiguous blocks across threads.
/// The minimum (ties: lowest index) does not depend on the partition.
template <typename Eval>
Candidate parallel_min(std::size_t count, int threads, Eval&& eval) {
  const auto n_threads = static_cast<std::size_t>(std::max(1, threads));
  std::vector<Candidate> partial(n_threads);
  const auto work = [&](std::size_t t) {
    const std::size_t begin = count * t / n_threads;
    const std::size_t end = count * (t + 1) / n_threads;
    Candidate best;
    for (std::size_t i = begin; i < end; ++i) {
      const Candidate c{eval(i), i};
      if (c.better_than(best)) best = c;
    }
    partial[t] = best;
  };
  if (n_threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  Candidate best;
  for (const auto& c : partial) {
    if (c.better_than(best)) best = c;
  }
  return best;
}

}  // namespace detail

inline OracleResult oracle_uniform(const Gauge& gauge, const OracleGrid& grid = {}) {
  grid.validate();
  const detail::OracleObjective objective(gauge, grid.n_phi, grid.include_breakpoints);
  const double per_triple = static_cast<double>(objective.size());

  // Stage 1: standard chart. Scale the resolutions down uniformly to fit half the budget.
  double scale = 1.0;
  const double full = static_cast<double>(grid.n_a) * grid.n_b * grid.n_theta * per_triple;
  if (full > 0.5 * grid.max_evaluations) scale = std::cbrt(0.5 * grid.max_evaluations / full);
  const auto shrink = [scale](int n) { return std::max(8, static_cast<int>(std::lround(n * scale))); };
  const int n_a = shrink(grid.n_a);
  const int n_b = shrink(grid.n_b);
  const int n_t = shrink(grid.n_theta);

  double a_lo, a_hi;
  if (grid.a_range) {
    std::tie(a_lo, a_hi) = *grid.a_range;
  } else {
    // The mean of R over a period is a, and exp(-2d-2f) <= R <= exp(2d-2f)
    // with d at most half the oscillation of f.
    const double half_osc = 0.5 * (objective.log_r_max() - objective.log_r_min());
    a_lo = std::exp(-2.0 * objective.log_r_max() - 2.0 * half_osc);
    a_hi = std::exp(-2.0 * objective.log_r_min() + 2.0 * half_osc);
    if (!(a_hi > a_lo)) {
      a_lo *= 0.5;
      a_hi *= 2.0;
    }
  }
  const double log_a_step = std::log(a_hi / a_lo) / (n_a - 1);
  const auto a_at = [&](int i) { return a_lo * std::exp(log_a_step * i); };
  const auto frac_at = [&](int j) { return (1.0 - 1e-6) * j / (n_b - 1); };
  const auto theta_at = [&](int t) { return pi * t / n_t; };
  const auto triple_at = [&](std::size_t idx) {
    const int t = static_cast<int>(idx % static_cast<std::size_t>(n_t));
    const int j = static_cast<int>((idx / static_cast<std::size_t>(n_t)) % static_cast<std::size_t>(n_b));
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(n_t) * static_cast<std::size_t>(n_b)));
    const double a = a_at(i);
    return StdEllipseParams{a, frac_at(j) * a, theta_at(t)};
  };
  const std::size_t stage1_count = static_cast<std::size_t>(n_a) * n_b * n_t;

  std::vector<double> values(stage1_count);
  const auto eval_std = [&](std::size_t idx) {
    const StdEllipseParams s = triple_at(idx);
    const double v =
        objective(s.a, s.bprime * std::cos(2.0 * s.theta), s.bprime * std::sin(2.0 * s.theta));
    values[idx] = v;
    return v;
  };
  const detail::Candidate first = detail::parallel_min(stage1_count, grid.threads, eval_std);

  OracleResult result;
  result.evaluations = static_cast<std::uint64_t>(stage1_count * objective.size());
  const StdEllipseParams coarse = triple_at(first.index);
  const EllipseParams coarse_params = from_standard(coarse);

  for (std::size_t idx = 0; idx < stage1_count; ++idx) {
    if (values[idx] > first.value + grid.cluster_delta) continue;
    const EllipseParams p = from_standard(triple_at(idx));
    const double dist = std::sqrt(std::pow(p.a2() - coarse_params.a2(), 2) + std::pow(p.b2() - coarse_params.b2(), 2) +
                                  std::pow(p.c2() - coarse_params.c2(), 2));
    result.near_optimal_radius = std::max(result.near_optimal_radius, dist / coarse_params.a2());
  }

  // Stage 2: Cartesian zoom around the best cell.
  constexpr int side = 11;
  constexpr std::size_t zoom_count = static_cast<std::size_t>(side) * side * side;
  double ca = coarse_params.a2();
  double cb = coarse_params.b2();
  double cc = coarse_params.c2();
  double best_value = first.value;
  const double a_cell = coarse.a * (std::exp(log_a_step) - 1.0);
  const double bc_cell = std::max(coarse.a / (n_b - 1), 2.0 * coarse.bprime * pi / n_t);
  double wa = 2.0 * a_cell;
  double wbc = 2.0 * bc_cell;
  const double zoom_cost = static_cast<double>(zoom_count) * per_triple;
  double budget = grid.max_evaluations - static_cast<double>(result.evaluations);
  while (budget >= zoom_cost && (wa > 1e-12 * ca || wbc > 1e-12 * ca)) {
    const auto offset = [](int i) { return (i - side / 2) / static_cast<double>(side / 2); };
    const auto point = [&](std::size_t idx) {
      const int k = static_cast<int>(idx % side);
      const int j = static_cast<int>((idx / side) % side);
      const int i = static_cast<int>(idx / (side * side));
      return std::array<double, 3>{ca + wa * offset(i), cb + wbc * offset(j), cc + wbc * offset(k)};
    };
    const detail::Candidate c = detail::parallel_min(zoom_count, grid.threads, [&](std::size_t idx) {
      const auto p = point(idx);
      if (!(p[0] > 0.0) || !(std::hypot(p[1], p[2]) < p[0])) return std::numeric_limits<double>::infinity();
      return objective(p[0], p[1], p[2]);
    });
    result.evaluations += static_cast<std::uint64_t>(zoom_cost);
    budget -= zoom_cost;
    ++result.zoom_levels;

    const int ci = static_cast<int>(c.index / (side * side));
    const int cj = static_cast<int>((c.index / side) % side);
    const int ck = static_cast<int>(c.index % side);
    const bool on_edge = ci == 0 || ci == side - 1 || cj == 0 || cj == side - 1 || ck == 0 || ck == side - 1;
    if (c.value < best_value) {
      const auto p = point(c.index);
      ca = p[0];
      cb = p[1];
      cc = p[2];
      best_value = c.value;
    }
    if (!on_edge || c.value >= best_value) {
      wa *= 0.75;
      wbc *= 0.75;
    }
  }

  result.best = to_standard(EllipseParams(ca, cb, cc));
  result.value = best_value;
  return result;
}

}  // namespace bmd
