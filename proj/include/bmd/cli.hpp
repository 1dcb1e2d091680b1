#pragma once

// Command-line front end: solve, oracle, verify, render.
//
// Exit codes: 0 success, 1 verification failure, 2 input error, 3 numerical failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>

#include "CLI11.hpp"

#include "bmd/error.hpp"
#include "bmd/json_io.hpp"
#include "bmd/oracle.hpp"
#include "bmd/report.hpp"
#include "bmd/solver.hpp"
#include "bmd/svg.hpp"

namespace bmd::cli {

enum ExitCode : int { ok = 0, verification_failed = 1, input_error = 2, numerical_error = 3 };

namespace detail {

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot write '" + path + "'");
  f << content;
  if (!f) throw Error(ErrorCode::InvalidInput, "failed writing '" + path + "'");
}

inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_file(path, content);
  }
}

struct SolveArgs {
  std::string input, out, svg, view = "body";
  SolverOptions opts;
  bool no_polish = false;
  bool no_refine = false;
};

struct OracleArgs {
  std::string input, out;
  OracleGrid grid;
  double a_min = 0.0, a_max = 0.0;
  bool no_breakpoints = false;
};

struct VerifyArgs {
  std::string input, report;
  double tol = 1e-6;
};

struct RenderArgs {
  std::string report, out, view = "body";
};

inline int solve(const SolveArgs& a, std::ostream& out) {
  SolverOptions opts = a.opts;
  opts.polish = !a.no_polish;
  opts.refine = !a.no_refine;
  const Gauge gauge = gauge_from_json(read_json_file(a.input));
  const SvgView view = parse_view(a.view);
  const UniformSolution sol = solve_uniform(gauge, opts);
  const SolveReport rep = build_report(gauge, sol);
  emit(a.out, report_to_json(rep).dump(2) + "\n", out);
  if (!a.svg.empty()) write_file(a.svg, render_svg(rep, view));
  if (!a.out.empty() && a.out != "-") {
    char line[128];
    std::snprintf(line, sizeof line, "d2 = %.15g  defect = %.15g\n", rep.d2, rep.defect);
    out << line;
  }
  return ok;
}

inline int oracle(const OracleArgs& a, std::ostream& out) {
  OracleGrid grid = a.grid;
  grid.include_breakpoints = !a.no_breakpoints;
  if (a.a_min > 0.0 || a.a_max > 0.0) grid.a_range = std::pair{a.a_min, a.a_max};
  const Gauge gauge = gauge_from_json(read_json_file(a.input));
  const OracleResult res = oracle_uniform(gauge, grid);
  emit(a.out, oracle_to_json(res).dump(2) + "\n", out);
  return ok;
}

inline int verify(const VerifyArgs& a, std::ostream& out) {
  const Gauge gauge = gauge_from_json(read_json_file(a.input));
  const SolveReport rep = report_from_json(read_json_file(a.report));

  AlternanceCertificate cert = rep.certificate;
  cert.defect = rep.defect;
  const CertificateVerdict cv = verify_certificate(gauge, rep.params_uniform, cert, a.tol);
  const Theorem1Verdict tv = verify_theorem1(rep, a.tol);

  // The report has to describe this body: points on its boundary at the
  // certificate angles, and the inscribed ellipse equal to the shifted one.
  const auto on_body = [&](Vec2 p, double phi) { return norm(p - gauge.boundary_point(phi)) <= a.tol * (1.0 + norm(p)); };
  const bool points_ok = on_body(rep.x_points[0], cert.phi1) && on_body(rep.x_points[1], cert.phi2) &&
                         on_body(rep.y_points[0], cert.psi1) && on_body(rep.y_points[1], cert.psi2);
  const double s = std::exp(2.0 * rep.defect);
  const auto close = [&](double x, double y) { return std::abs(x - y) <= a.tol * (1.0 + std::abs(y)); };
  const EllipseParams& u = rep.params_uniform;
  const EllipseParams& in = rep.params_inscribed;
  const bool shift_ok = close(in.a2(), s * u.a2()) && close(in.b2(), s * u.b2()) && close(in.c2(), s * u.c2());
  const PDMatrix2 t = pd_sqrt(quadratic_form(in));
  const bool matrix_ok = close(rep.T_hat.m11(), t.m11()) && close(rep.T_hat.m12(), t.m12()) &&
                         close(rep.T_hat.m22(), t.m22());

  const auto mark = [](bool b) { return b ? "pass" : "FAIL"; };
  out << "certificate: " << cv.describe() << "\n";
  out << "operator: " << tv.describe() << "\n";
  out << "body: points on boundary: " << mark(points_ok) << "; inscribed shift: " << mark(shift_ok)
      << "; T_hat from inscribed ellipse: " << mark(matrix_ok) << "\n";
  const bool passed = cv.passed() && tv.passed() && points_ok && shift_ok && matrix_ok;
  out << (passed ? "PASS" : "FAIL") << "\n";
  return passed ? ok : verification_failed;
}

inline int render(const RenderArgs& a, std::ostream& out) {
  const SvgView view = parse_view(a.view);
  const SolveReport rep = report_from_json(read_json_file(a.report));
  emit(a.out, render_svg(rep, view), out);
  return ok;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Banach-Mazur distance of a planar symmetric body to the Euclidean plane"};
  app.require_subcommand(1);

  detail::SolveArgs s;
  auto* solve = app.add_subcommand("solve", "solve for the optimal ellipse and write a report");
  solve->add_option("--input", s.input, "body descriptor JSON")->required();
  solve->add_option("--out", s.out, "report JSON path (default: stdout)");
  solve->add_option("--svg", s.svg, "also write a figure");
  solve->add_option("--view", s.view, "figure view: body or image")->capture_default_str();
  solve->add_option("--grid", s.opts.grid_size, "angles per half-turn")->capture_default_str();
  solve->add_option("--tol", s.opts.bisect_tol, "bisection tolerance on the defect")->capture_default_str();
  solve->add_option("--max-bisect", s.opts.max_bisect, "bisection step limit")->capture_default_str();
  solve->add_option("--cert-tol", s.opts.cert_tol, "certificate residual tolerance")->capture_default_str();
  solve->add_option("--seed", s.opts.seed, "constraint shuffle seed")->capture_default_str();
  solve->add_flag("--no-polish", s.no_polish, "skip the exchange polish");
  solve->add_flag("--no-refine", s.no_refine, "skip local extremum refinement");

  detail::OracleArgs o;
  auto* oracle = app.add_subcommand("oracle", "brute-force grid search for the optimal ellipse");
  oracle->add_option("--input", o.input, "body descriptor JSON")->required();
  oracle->add_option("--out", o.out, "result JSON path (default: stdout)");
  oracle->add_option("--n-a", o.grid.n_a)->capture_default_str();
  oracle->add_option("--n-b", o.grid.n_b)->capture_default_str();
  oracle->add_option("--n-theta", o.grid.n_theta)->capture_default_str();
  oracle->add_option("--n-phi", o.grid.n_phi)->capture_default_str();
  oracle->add_option("--a-min", o.a_min, "lower end of the a search interval");
  oracle->add_option("--a-max", o.a_max, "upper end of the a search interval");
  oracle->add_option("--max-evals", o.grid.max_evaluations, "evaluation budget")->capture_default_str();
  oracle->add_option("--threads", o.grid.threads, "worker threads")->capture_default_str();
  oracle->add_flag("--no-breakpoints", o.no_breakpoints, "use the uniform angle grid only");

  detail::VerifyArgs v;
  auto* verify = app.add_subcommand("verify", "re-check a report against its body");
  verify->add_option("--input", v.input, "body descriptor JSON")->required();
  verify->add_option("--report", v.report, "report JSON")->required();
  verify->add_option("--tol", v.tol, "tolerance")->capture_default_str();

  detail::RenderArgs r;
  auto* render = app.add_subcommand("render", "draw a report as SVG");
  render->add_option("--report", r.report, "report JSON")->required();
  render->add_option("--out", r.out, "SVG path (default: stdout)");
  render->add_option("--view", r.view, "body or image")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return input_error;
  }

  try {
    if (*solve) return detail::solve(s, out);
    if (*oracle) return detail::oracle(o, out);
    if (*verify) return detail::verify(v, out);
    return detail::render(r, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_numerical(e.code()) ? numerical_error : input_error;
  } catch (const json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return input_error;
  }
}

}  // namespace bmd::cli
