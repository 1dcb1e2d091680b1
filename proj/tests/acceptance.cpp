// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "bmd/ellipse.hpp"
#include "bmd/gauge.hpp"
#include "bmd/json_io.hpp"
#include "bmd/oracle.hpp"
#include "bmd/report.hpp"
#include "bmd/solver.hpp"
#include "support/bodies.hpp"

#ifndef BMD_SAMPLES_DIR
#define BMD_SAMPLES_DIR "samples"
#endif

using namespace bmd;

namespace {

using Clock = std::chrono::steady_clock;

const double inf = std::numeric_limits<double>::infinity();
const double sqrt2 = std::sqrt(2.0);

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) detail = what;
      ok = false;
    }
  }
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& check) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  if (!o.ok) ++failures;
  std::printf("%s  %2d  %s (%.1fs)%s%s\n", o.ok ? "PASS" : "FAIL", id, name, seconds_since(t0),
              o.detail.empty() ? "" : ": ", o.detail.c_str());
  std::fflush(stdout);
}

std::vector<Vec2> regular_polygon(int n, double circumradius, double offset = 0.0) {
  std::vector<Vec2> v;
  for (int k = 0; k < n; ++k) v.push_back(circumradius * unit(offset + 2.0 * pi * k / n));
  return v;
}

struct CorpusEntry {
  std::string name;
  Gauge gauge;
  UniformSolution solution;
};

std::vector<CorpusEntry> build_corpus() {
  std::vector<std::pair<std::string, Gauge>> bodies{
      {"circle", gauge_circle()},
      {"square", gauge_from_lp(inf)},
      {"l1", gauge_from_lp(1.0)},
      {"lp3", gauge_from_lp(3.0)},
      {"ellipse", gauge_from_ellipse({1.0, 0.2, 0.1})},
      {"hexagon", gauge_from_polygon(regular_polygon(6, 2.0 / std::sqrt(3.0)))},
      {"octagon", gauge_from_polygon(regular_polygon(8, 1.0, 0.1))},
  };
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(BMD_SAMPLES_DIR)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) bodies.emplace_back(f.filename().string(), gauge_from_json(read_json_file(f.string())));
  for (std::uint64_t s = 1; s <= 20; ++s) {
    bodies.emplace_back("convex#" + std::to_string(s), gauge_from_polygon(fixtures::random_convex_symmetric(100 + s)));
    bodies.emplace_back("star#" + std::to_string(s), gauge_from_polygon(fixtures::random_star_symmetric(200 + s)));
  }
  std::vector<CorpusEntry> out;
  for (auto& [name, g] : bodies) out.push_back({name, g, solve_uniform(g)});
  return out;
}

/// Is `a` within tol of one of `targets` modulo pi?
bool near_any(double a, const std::array<double, 2>& targets, double tol) {
  return std::any_of(targets.begin(), targets.end(),
                     [&](double t) { return half_turn_distance(a, t) <= tol; });
}

Outcome circle() {
  Outcome o;
  const auto t0 = Clock::now();
  const UniformSolution s = solve_uniform(gauge_circle());
  const double d = std::exp(2.0 * s.defect);
  const double t = seconds_since(t0);
  o.require(std::abs(d - 1.0) <= 1e-9, fmt("distance %.3e off", d - 1.0));
  o.require(s.defect == 0.0, fmt("defect %.3e", s.defect));
  o.require(t < 1.0, fmt("runtime %.2fs", t));
  o.detail = o.ok ? fmt("d2 = %.12f, %.3fs", d, t) : o.detail;
  return o;
}

Outcome ellipse_identity() {
  Outcome o;
  std::mt19937_64 rng(2024);
  double worst_rel = 0.0, worst_defect = 0.0;
  for (int i = 0; i < 20; ++i) {
    const EllipseParams e = fixtures::random_ellipse(rng);
    const UniformSolution s = solve_uniform(gauge_from_ellipse(e));
    const double scale = e.a2();
    const double rel = std::max({std::abs(s.params.a2() - e.a2()), std::abs(s.params.b2() - e.b2()),
                                 std::abs(s.params.c2() - e.c2())}) /
                       scale;
    worst_rel = std::max(worst_rel, rel);
    worst_defect = std::max(worst_defect, s.defect);
  }
  o.require(worst_rel <= 1e-6, fmt("params off by %.3e relative", worst_rel));
  o.require(worst_defect <= 1e-8, fmt("defect %.3e", worst_defect));
  if (o.ok) o.detail = fmt("max relative error %.2e, max defect %.2e", worst_rel, worst_defect);
  return o;
}

Outcome square_and_diamond() {
  Outcome o;
  struct Case {
    const char* name;
    Gauge gauge;
    std::array<double, 2> vertex_dirs;
    std::array<double, 2> midpoint_dirs;
  };
  const double s = sqrt2;
  const std::vector<Case> cases{
      {"lp-inf", gauge_from_lp(inf), {pi / 4, 3 * pi / 4}, {0.0, pi / 2}},
      {"square polygon", gauge_from_polygon({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}), {pi / 4, 3 * pi / 4}, {0.0, pi / 2}},
      {"diamond", gauge_from_polygon({{s, 0}, {0, s}, {-s, 0}, {0, -s}}), {0.0, pi / 2}, {pi / 4, 3 * pi / 4}},
  };
  double worst_time = 0.0;
  for (const auto& c : cases) {
    const auto t0 = Clock::now();
    const UniformSolution sol = solve_uniform(c.gauge);
    const double t = seconds_since(t0);
    worst_time = std::max(worst_time, t);
    const double d = std::exp(2.0 * sol.defect);
    const EllipseParams in = to_one_sided(c.gauge, sol).params;
    const std::string tag = std::string(c.name) + ": ";
    o.require(std::abs(d - sqrt2) <= 1e-6, tag + fmt("distance %.12f", d));
    o.require(std::abs(in.a2() - 1.0) <= 1e-6 && std::abs(in.b2()) <= 1e-6 && std::abs(in.c2()) <= 1e-6,
              tag + fmt("inscribed (%.8f, %.2e, %.2e)", in.a2(), in.b2(), in.c2()));
    const auto& cert = sol.certificate;
    o.require(near_any(cert.phi1, c.vertex_dirs, 1e-4) && near_any(cert.phi2, c.vertex_dirs, 1e-4) &&
                  half_turn_distance(cert.phi1, cert.phi2) > 1e-4,
              tag + fmt("maximizers at %.6f, %.6f", cert.phi1, cert.phi2));
    o.require(near_any(cert.psi1, c.midpoint_dirs, 1e-4) && near_any(cert.psi2, c.midpoint_dirs, 1e-4) &&
                  half_turn_distance(cert.psi1, cert.psi2) > 1e-4,
              tag + fmt("minimizers at %.6f, %.6f", cert.psi1, cert.psi2));
    o.require(t < 5.0, tag + fmt("runtime %.2fs", t));
  }
  // The unscaled l1 ball: same distance, inscribed circle of radius 1/sqrt2.
  const double d1 = distance(gauge_from_lp(1.0));
  o.require(std::abs(d1 - sqrt2) <= 1e-6, fmt("lp-1 distance %.12f", d1));
  if (o.ok) o.detail = fmt("slowest %.3fs", worst_time);
  return o;
}

Outcome hexagon() {
  Outcome o;
  const Gauge g = gauge_from_polygon(regular_polygon(6, 2.0 / std::sqrt(3.0)));
  const double d = distance(g);
  const double expected = 2.0 / std::sqrt(3.0);
  o.require(std::abs(d - expected) <= 1e-6, fmt("distance %.12f, expected %.12f", d, expected));
  const OracleResult r = oracle_uniform(g);
  const double od = std::exp(2.0 * r.value);
  o.require(std::abs(od - expected) <= 1e-4, fmt("oracle distance %.9f", od));
  if (o.ok) o.detail = fmt("solver %.12f, oracle %.9f", d, od);
  return o;
}

Outcome universal_bound() {
  // The upper bound is a consequence of convexity, so it is checked on convex
  // polygons; star-shaped ones are held to the lower bound only.
  Outcome o;
  double lo = inf, hi = 0.0, star_lo = inf, star_hi = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const double d = distance(gauge_from_polygon(fixtures::random_convex_symmetric(seed, 3 + seed % 8)));
    lo = std::min(lo, d);
    hi = std::max(hi, d);
    const double ds = distance(gauge_from_polygon(fixtures::random_star_symmetric(seed)));
    star_lo = std::min(star_lo, ds);
    star_hi = std::max(star_hi, ds);
  }
  o.require(lo >= 1.0 - 1e-9 && hi <= sqrt2 + 1e-6, fmt("convex range [%.9f, %.9f]", lo, hi));
  o.require(star_lo >= 1.0 - 1e-9, fmt("star minimum %.9f", star_lo));
  o.detail = (o.ok ? std::string() : o.detail + "; ") +
             fmt("convex range [%.6f, %.6f]; non-convex star range [%.6f, %.6f]", lo, hi, star_lo, star_hi);
  return o;
}

Outcome oracle_agreement(Clock::time_point suite_start) {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Gauge g = gauge_from_polygon(fixtures::random_convex_symmetric(500 + seed));
    const double d = solve_uniform(g).defect;
    const double v = oracle_uniform(g).value;
    worst = std::max(worst, std::abs(d - v));
    o.require(std::abs(d - v) <= 1e-4, fmt("seed %.0f: solver %.9f, oracle %.9f", 500.0 + seed, d, v));
  }
  const double total = seconds_since(suite_start);
  o.require(total < 1800.0, fmt("suite time %.0fs", total));
  if (o.ok) o.detail = fmt("max |defect - oracle| %.2e, suite so far %.0fs", worst, total);
  return o;
}

Outcome linear_invariance() {
  Outcome o;
  const std::vector<Vec2> base{{2, 0.3}, {0.5, 1}, {-1.2, 0.8}, {-2, -0.3}, {-0.5, -1}, {1.2, -0.8}};
  const double ref = distance(gauge_from_polygon(base));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 1.0);
  double spread = 0.0;
  for (int i = 0; i < 20;) {
    const double a = n(rng), b = n(rng), c = n(rng), d = n(rng);
    if (std::abs(a * d - b * c) < 0.1 * (a * a + b * b + c * c + d * d)) continue;
    ++i;
    std::vector<Vec2> mapped;
    for (const Vec2& v : base) mapped.push_back({a * v.x + b * v.y, c * v.x + d * v.y});
    spread = std::max(spread, std::abs(distance(gauge_from_polygon(mapped)) - ref));
  }
  o.require(spread <= 1e-6, fmt("distance moved by %.3e", spread));
  if (o.ok) o.detail = fmt("d2 = %.9f, max change %.2e", ref, spread);
  return o;
}

Outcome one_sided(const std::vector<CorpusEntry>& corpus) {
  Outcome o;
  double worst_gap = 0.0, worst_violation = 0.0;
  for (const auto& c : corpus) {
    const OneSidedSolution s = to_one_sided(c.gauge, c.solution);
    const double gap = std::abs(s.value - 2.0 * c.solution.defect);
    worst_gap = std::max(worst_gap, gap);
    worst_violation = std::max(worst_violation, s.max_violation);
    o.require(gap <= 1e-8, c.name + fmt(": one-sided value off by %.3e", gap));
    o.require(s.max_violation <= 1e-9, c.name + fmt(": shifted ellipse exceeds body by %.3e", s.max_violation));
  }
  if (o.ok) o.detail = fmt("%.0f bodies, max gap %.2e, max violation %.2e", double(corpus.size()), worst_gap,
                           worst_violation);
  return o;
}

/// Sup-norm of f - g after moving `p` along `dir` by t; t is capped to stay in the cone.
struct Ray {
  const Gauge& gauge;
  const AngleGrid& grid;
  EllipseParams p;
  TrigTriple dir;

  TrigTriple at(double t) const { return {p.a2() + t * dir.a, p.b2() + t * dir.b, p.c2() + t * dir.c}; }
  double cone_limit() const {
    double lo = 0.0, hi = 1.0;
    while (at(hi).in_cone() && hi < 1e6) hi *= 2.0;
    if (at(hi).in_cone()) return hi;
    for (int i = 0; i < 100; ++i) (at(0.5 * (lo + hi)).in_cone() ? lo : hi) = 0.5 * (lo + hi);
    return lo;
  }
  double sup(double t) const { return sup_norm(gauge, EllipseParams(at(t)), grid, true); }
};

bool rejects(const Gauge& g, const EllipseParams& p, const AngleGrid& grid) {
  try {
    extract_certificate(g, p, 1e-6, grid);
  } catch (const Error& e) {
    return e.code() == ErrorCode::NoAlternance;
  }
  return false;
}

Outcome certificates(const std::vector<CorpusEntry>& corpus) {
  Outcome o;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n(0.0, 1.0);
  int suboptimal = 0;
  for (const auto& c : corpus) {
    const AngleGrid grid = make_grid(c.gauge, SolverOptions{}.grid_size);
    const auto& sol = c.solution;
    const CertificateVerdict v = verify_certificate(c.gauge, sol.params, sol.certificate, 1e-6, grid);
    o.require(v.passed(), c.name + ": " + v.describe());
    if (sol.defect > 0.0) {
      o.require(strictly_interleaved(sol.certificate), c.name + ": angles not strictly interleaved");
    }
    if (sol.defect < 1e-4) continue;
    const double target = 1.05 * sol.defect;

    // Uniform shift of the log-radius by 5% of the defect.
    const EllipseParams shifted = sol.params.shifted_log(0.05 * sol.defect);
    o.require(std::abs(sup_norm(c.gauge, shifted, grid, true) - target) <= 1e-9, c.name + ": shift miscalibrated");
    o.require(rejects(c.gauge, shifted, grid), c.name + ": shifted params produced a certificate");
    ++suboptimal;

    // Random directions in parameter space; the sup-norm grows monotonically
    // along each ray from the optimum, so bisection hits the 5% level.
    for (int k = 0; k < 3; ++k) {
      const TrigTriple dir{sol.params.a2() * n(rng), sol.params.a2() * n(rng), sol.params.a2() * n(rng)};
      const Ray ray{c.gauge, grid, sol.params, dir};
      double hi = ray.cone_limit() * (1.0 - 1e-9);
      if (ray.sup(hi) < target) continue;
      double lo = 0.0;
      for (int i = 0; i < 80 && hi - lo > 1e-15 * (1.0 + hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (ray.sup(mid) < target ? lo : hi) = mid;
      }
      const EllipseParams q(ray.at(hi));
      o.require(rejects(c.gauge, q, grid), c.name + fmt(": params with sup %.9f certified", ray.sup(hi)));
      ++suboptimal;
    }
  }
  if (o.ok) o.detail = fmt("%.0f verified, %.0f inflated parameter sets rejected", double(corpus.size()), suboptimal);
  return o;
}

Outcome determinants() {
  Outcome o;
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-2.0 * pi, 2.0 * pi);
  double worst3 = 0.0, worst2 = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng);
    worst3 = std::max(worst3,
                      std::abs(linalg::determinant<3>(three_point_matrix(a, b, c)) - three_point_determinant(a, b, c)));
    worst2 = std::max(worst2, std::abs(linalg::determinant<3>(tangent_matrix(a, b)) - tangent_determinant(a, b)));
  }
  o.require(worst3 <= 1e-12, fmt("three-point determinant off by %.3e", worst3));
  o.require(worst2 <= 1e-12, fmt("tangent determinant off by %.3e", worst2));
  if (o.ok) o.detail = fmt("max errors %.2e and %.2e", worst3, worst2);
  return o;
}

Outcome perturbations(const std::vector<CorpusEntry>& corpus) {
  Outcome o;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int cases = 0;
  while (cases < 100) {
    const EllipseParams e = fixtures::random_ellipse(rng);
    const double alpha = pi * u(rng);
    const double beta = alpha + pi * (0.05 + 0.9 * u(rng));
    const double t = 0.05 * u(rng) + 1e-4;
    EllipseParams g = e;
    try {
      g = perturb(e, alpha, beta, t);
    } catch (const Error&) {
      continue;
    }
    ++cases;
    for (int k = 1; k < 1024; ++k) {
      const double phi = alpha + pi * k / 1024;
      if (std::abs(phi - beta) < 1e-9) continue;
      const double diff = g.log_rho(phi) - e.log_rho(phi);
      o.require(phi < beta ? diff < 0.0 : diff > 0.0, fmt("sign wrong at %.6f (alpha %.6f, beta %.6f)", phi, alpha, beta));
    }
  }

  double worst_gain = -inf;
  int probes = 0;
  for (const auto& c : corpus) {
    const AngleGrid grid = make_grid(c.gauge, SolverOptions{}.grid_size);
    for (int i = 0; i < 5; ++i) {
      const double alpha = pi * u(rng);
      const double beta = alpha + pi * (0.05 + 0.9 * u(rng));
      const double t = (u(rng) - 0.5) * 0.02;
      EllipseParams p = c.solution.params;
      try {
        p = perturb(c.solution.params, alpha, beta, t);
      } catch (const Error&) {
        continue;
      }
      ++probes;
      const double gain = c.solution.defect - sup_norm(c.gauge, p, grid, true);
      worst_gain = std::max(worst_gain, gain);
      o.require(gain <= 1e-9, c.name + fmt(": perturbation lowered the sup-norm by %.3e", gain));
    }
  }
  if (o.ok) o.detail = fmt("100 sign patterns, %.0f probes, best improvement %.2e", probes, worst_gain);
  return o;
}

Outcome matrix_layer(const std::vector<CorpusEntry>& corpus) {
  Outcome o;
  std::mt19937_64 rng(12);
  double worst_sqrt = 0.0;
  for (int i = 0; i < 500; ++i) {
    const PDMatrix2 s = fixtures::random_pd(rng);
    const PDMatrix2 back = pd_sqrt(s).squared();
    const double err = std::max({std::abs(back.m11() - s.m11()), std::abs(back.m12() - s.m12()),
                                 std::abs(back.m22() - s.m22())}) /
                       s.norm();
    worst_sqrt = std::max(worst_sqrt, err);
  }
  o.require(worst_sqrt <= 1e-12, fmt("pd_sqrt round trip off by %.3e", worst_sqrt));

  double worst_norm = 0.0;
  for (const auto& c : corpus) {
    const SolveReport r = build_report(c.gauge, c.solution);
    for (std::size_t i = 0; i < 2; ++i) {
      const double ex = std::abs(norm(r.T_hat.apply(r.x_points[i])) - r.d2);
      const double ey = std::abs(norm(r.T_hat.apply(r.y_points[i])) - 1.0);
      worst_norm = std::max({worst_norm, ex, ey});
      o.require(ex <= 1e-6, c.name + fmt(": |T x%.0f| - d2 = %.3e", double(i + 1), ex));
      o.require(ey <= 1e-6, c.name + fmt(": |T y%.0f| - 1 = %.3e", double(i + 1), ey));
    }
  }
  if (o.ok) o.detail = fmt("round trip %.2e, report invariants %.2e", worst_sqrt, worst_norm);
  return o;
}

}  // namespace

int main() {
  const auto start = Clock::now();
  std::vector<CorpusEntry> corpus;
  try {
    corpus = build_corpus();
  } catch (const std::exception& e) {
    std::printf("corpus construction failed: %s\n", e.what());
    return 1;
  }
  std::printf("corpus: %zu bodies solved in %.1fs\n", corpus.size(), seconds_since(start));

  report(1, "circle", circle);
  report(2, "ellipse bodies recover their parameters", ellipse_identity);
  report(3, "square and diamond", square_and_diamond);
  report(4, "regular hexagon", hexagon);
  report(5, "universal bound", universal_bound);
  report(6, "oracle agreement", [&] { return oracle_agreement(start); });
  report(7, "linear invariance", linear_invariance);
  report(8, "one-sided consistency", [&] { return one_sided(corpus); });
  report(9, "certificates", [&] { return certificates(corpus); });
  report(10, "interpolation determinants", determinants);
  report(11, "perturbation sign pattern and optimality", [&] { return perturbations(corpus); });
  report(12, "matrix layer", [&] { return matrix_layer(corpus); });

  std::printf("%d of 12 criteria failed, %.0fs total\n", failures, seconds_since(start));
  return failures == 0 ? 0 : 1;
}
