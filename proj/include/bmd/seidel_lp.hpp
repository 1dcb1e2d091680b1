#pragma once

// Seidel's randomized incremental linear programming for a fixed small dimension.
//
// Maximizes a lexicographic objective list subject to half-spaces a.x <= b and a
// bounding box. Ties in the leading objective are broken by the following ones,
// which keeps the optimum unique; the incremental scheme relies on that.
// Constraints are processed in the order given: shuffle them first for the
// expected linear running time.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace bmd::lp {

template <std::size_t D>
using Point = std::array<double, D>;

template <std::size_t D>
struct HalfSpace {
  Point<D> a{};
  double b = 0.0;
};

template <std::size_t D>
struct Objective {
  Point<D> c{};
  /// Magnitude the coefficients descend from; entries far below it count as zero.
  double scale = 1.0;
};

template <std::size_t D>
struct Box {
  Point<D> lower{};
  Point<D> upper{};
};

namespace detail {

inline constexpr double feasibility_eps = 1e-13;
inline constexpr double zero_eps = 1e-11;

template <std::size_t D>
bool violates(const HalfSpace<D>& h, const Point<D>& x) {
  double lhs = 0.0;
  double scale = std::abs(h.b);
  for (std::size_t j = 0; j < D; ++j) {
    lhs += h.a[j] * x[j];
    scale += std::abs(h.a[j] * x[j]);
  }
  return lhs - h.b > feasibility_eps * scale;
}

/// Sign of the first objective that is not (numerically) flat along coordinate j.
template <std::size_t D>
int preferred_direction(std::span<const Objective<D>> objectives, std::size_t j) {
  for (const auto& o : objectives) {
    if (std::abs(o.c[j]) > zero_eps * o.scale) return o.c[j] > 0.0 ? 1 : -1;
  }
  return -1;
}

template <std::size_t D>
std::optional<Point<D>> solve(std::span<const HalfSpace<D>> constraints,
                              std::span<const Objective<D>> objectives, const Box<D>& box);

inline std::optional<Point<1>> solve_interval(std::span<const HalfSpace<1>> constraints,
                                              std::span<const Objective<1>> objectives,
                                              const Box<1>& box) {
  double lo = box.lower[0];
  double hi = box.upper[0];
  for (const auto& h : constraints) {
    const double a = h.a[0];
    if (a > 0.0) {
      hi = std::min(hi, h.b / a);
    } else if (a < 0.0) {
      lo = std::max(lo, h.b / a);
    } else if (h.b < 0.0) {
      return std::nullopt;
    }
  }
  if (lo > hi) {
    if (lo - hi > feasibility_eps * (std::abs(lo) + std::abs(hi) + 1.0)) return std::nullopt;
    lo = hi = 0.5 * (lo + hi);
  }
  return Point<1>{preferred_direction<1>(objectives, 0) > 0 ? hi : lo};
}

// Restricts a D-dimensional problem to the hyperplane h.a.x = h.b by eliminating
// the coordinate with the largest coefficient.
template <std::size_t D>
class Elimination {
 public:
  explicit Elimination(const HalfSpace<D>& h) : h_(h) {
    k_ = 0;
    for (std::size_t j = 1; j < D; ++j) {
      if (std::abs(h.a[j]) > std::abs(h.a[k_])) k_ = j;
    }
  }

  bool degenerate() const { return h_.a[k_] == 0.0; }

  /// nullopt: the row vanishes on the hyperplane. `infeasible` is set if it then fails.
  std::optional<HalfSpace<D - 1>> project(const HalfSpace<D>& g, bool& infeasible) const {
    HalfSpace<D - 1> out;
    const double ratio = g.a[k_] / h_.a[k_];
    double row_scale = 0.0;
    double orig_scale = 0.0;
    for (std::size_t j = 0, o = 0; j < D; ++j) {
      orig_scale = std::max(orig_scale, std::abs(g.a[j]));
      if (j == k_) continue;
      out.a[o] = g.a[j] - ratio * h_.a[j];
      row_scale = std::max(row_scale, std::abs(out.a[o]));
      ++o;
    }
    out.b = g.b - ratio * h_.b;
    if (row_scale <= 1e-12 * orig_scale) {
      if (out.b < -feasibility_eps * (std::abs(g.b) + std::abs(ratio * h_.b) + orig_scale)) infeasible = true;
      return std::nullopt;
    }
    for (auto& v : out.a) v /= row_scale;
    out.b /= row_scale;
    return out;
  }

  Objective<D - 1> project(const Objective<D>& obj) const {
    Objective<D - 1> out;
    const double ratio = obj.c[k_] / h_.a[k_];
    double scale = obj.scale;
    for (std::size_t j = 0, o = 0; j < D; ++j) {
      if (j == k_) continue;
      out.c[o] = obj.c[j] - ratio * h_.a[j];
      scale = std::max(scale, std::abs(ratio * h_.a[j]));
      ++o;
    }
    out.scale = scale;
    return out;
  }

  Box<D - 1> project(const Box<D>& box) const {
    Box<D - 1> out;
    for (std::size_t j = 0, o = 0; j < D; ++j) {
      if (j == k_) continue;
      out.lower[o] = box.lower[j];
      out.upper[o] = box.upper[j];
      ++o;
    }
    return out;
  }

  /// Box limits of the eliminated coordinate, as half-spaces in the full space.
  std::array<HalfSpace<D>, 2> eliminated_bounds(const Box<D>& box) const {
    HalfSpace<D> upper;
    upper.a[k_] = 1.0;
    upper.b = box.upper[k_];
    HalfSpace<D> lower;
    lower.a[k_] = -1.0;
    lower.b = -box.lower[k_];
    return {upper, lower};
  }

  Point<D> lift(const Point<D - 1>& y) const {
    Point<D> x{};
    double acc = h_.b;
    for (std::size_t j = 0, o = 0; j < D; ++j) {
      if (j == k_) continue;
      x[j] = y[o];
      acc -= h_.a[j] * y[o];
      ++o;
    }
    x[k_] = acc / h_.a[k_];
    return x;
  }

 private:
  HalfSpace<D> h_;
  std::size_t k_;
};

template <std::size_t D>
std::optional<Point<D>> solve(std::span<const HalfSpace<D>> constraints,
                              std::span<const Objective<D>> objectives, const Box<D>& box) {
  if constexpr (D == 1) {
    return solve_interval(constraints, objectives, box);
  } else {
    Point<D> x{};
    for (std::size_t j = 0; j < D; ++j) {
      x[j] = preferred_direction<D>(objectives, j) > 0 ? box.upper[j] : box.lower[j];
    }

    std::vector<HalfSpace<D - 1>> sub;
    std::vector<Objective<D - 1>> sub_objectives(objectives.size());
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      if (!violates(constraints[i], x)) continue;

      const Elimination<D> elim(constraints[i]);
      if (elim.degenerate()) return std::nullopt;  // 0 <= b with b < 0

      bool infeasible = false;
      sub.clear();
      sub.reserve(i + 2);
      for (const auto& bound : elim.eliminated_bounds(box)) {
        if (auto p = elim.project(bound, infeasible)) sub.push_back(*p);
      }
      for (std::size_t m = 0; m < i; ++m) {
        if (auto p = elim.project(constraints[m], infeasible)) sub.push_back(*p);
      }
      if (infeasible) return std::nullopt;
      for (std::size_t o = 0; o < objectives.size(); ++o) sub_objectives[o] = elim.project(objectives[o]);

      const auto y = solve<D - 1>(std::span<const HalfSpace<D - 1>>(sub),
                                  std::span<const Objective<D - 1>>(sub_objectives), elim.project(box));
      if (!y) return std::nullopt;
      x = elim.lift(*y);
    }
    return x;
  }
}

}  // namespace detail

/// Lexicographically maximizes `objectives` over the box intersected with the
/// half-spaces. nullopt when infeasible.
template <std::size_t D>
std::optional<Point<D>> maximize(std::span<const HalfSpace<D>> constraints,
                                 std::span<const Objective<D>> objectives, const Box<D>& box) {
  return detail::solve<D>(constraints, objectives, box);
}

/// Objective list: `primary`, then each coordinate in turn as tie-breakers.
template <std::size_t D>
std::vector<Objective<D>> with_coordinate_tiebreak(const Point<D>& primary) {
  std::vector<Objective<D>> out;
  double scale = 0.0;
  for (double v : primary) scale = std::max(scale, std::abs(v));
  out.push_back({primary, scale > 0.0 ? scale : 1.0});
  for (std::size_t j = 0; j < D; ++j) {
    Objective<D> o;
    o.c[j] = 1.0;
    out.push_back(o);
  }
  return out;
}

/// Deterministic shuffle used before solving.
template <std::size_t D>
void shuffle(std::vector<HalfSpace<D>>& constraints, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::shuffle(constraints.begin(), constraints.end(), rng);
}

}  // namespace bmd::lp
