#pragma once

// Command dispatch for the hyperlift executable. Each command reads one JSON input and writes
// its artifacts into the output directory.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "applications.hpp"
#include "error.hpp"
#include "interp_bounds.hpp"
#include "io.hpp"
#include "lifting.hpp"

namespace hyperlift::cli {

enum ExitCode { kOk = 0, kValidation = 2, kNumerical = 3 };

struct RunConfig {
  /// lift | bounds | matrix | sos | check | grid2d
  std::string command;
  std::string input;
  std::size_t grid = 4096;
  /// c0 | c1 (lift only)
  std::string mode = "c0";
  std::optional<Interval> i0;
  std::optional<Interval> i1;
  /// output directory
  std::string out = ".";
  /// lift c0: refinement tol; lift c1: derivative-jump tol; sos: negativity tol; check: Glaeser tol
  std::optional<double> tol;
  /// check only: glaeser | lagrange | taylor | all
  std::string suite = "all";
};

/// Parses "a,b" into an interval.
inline Interval parse_interval(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw Error(ErrorKind::InvalidParameter, "interval must be given as a,b: " + s);
  try {
    std::size_t used = 0;
    const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
    const double lo = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    const double hi = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    if (!(lo < hi)) throw Error(ErrorKind::InvalidParameter, "interval must satisfy a < b: " + s);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidParameter, "cannot parse interval " + s);
  }
}

namespace detail {

inline std::filesystem::path out_path(const RunConfig& cfg, const char* name) {
  return std::filesystem::path(cfg.out) / name;
}

inline void require_positive_tol(const RunConfig& cfg) {
  if (cfg.tol && !(*cfg.tol > 0.0 && std::isfinite(*cfg.tol)))
    throw Error(ErrorKind::InvalidParameter, "--tol must be positive");
}

inline int run_lift(const RunConfig& cfg, std::ostream& log) {
  const auto curve = io::parse_curve(io::read_json_file(cfg.input));
  LiftResult L;
  if (cfg.mode == "c0") {
    LiftOptions opt;
    opt.interval = cfg.i0;
    if (cfg.tol) opt.refine_options.tol = *cfg.tol;
    L = lift_sorted(curve, cfg.grid, opt);
  } else {
    C1Options opt;
    if (cfg.tol) opt.c1_tol = *cfg.tol;
    L = lift_c1(curve, cfg.grid, opt, cfg.i0);
  }
  io::write_text(out_path(cfg, "branches.csv"), io::branches_csv(L.grid, L.branches));
  io::write_json(out_path(cfg, "lift.json"), io::to_json(L));
  log << "lift " << to_string(L.mode) << ": " << L.grid.size() << " points, empirical_lip = "
      << io::detail::fmt(L.empirical_lip) << "\n";
  for (const auto& w : L.warnings) log << "warning: " << w << "\n";
  return kOk;
}

inline int run_bounds(const RunConfig& cfg, std::ostream& log) {
  const auto curve = io::parse_curve(io::read_json_file(cfg.input));
  if (!cfg.i0) throw Error(ErrorKind::InvalidParameter, "bounds needs --i0");
  const Interval I1 = cfg.i1.value_or(curve.interval());
  const auto rep = bound_report(curve, *cfg.i0, I1, cfg.grid);
  auto j = io::to_json(rep);
  j["assumptions"] = io::to_json(verify_assumptions(dominant_system(curve), *cfg.i0, I1, rep.A0));
  io::write_json(out_path(cfg, "bounds.json"), j);
  log << "A0 = " << io::detail::fmt(rep.A0) << ", empirical_lip = " << io::detail::fmt(rep.empirical_lip)
      << ", ratio = " << io::detail::fmt(rep.ratio) << "\n";
  return kOk;
}

inline int run_matrix(const RunConfig& cfg, std::ostream& log) {
  const auto A = io::parse_matrix(io::read_json_file(cfg.input));
  LiftOptions opt;
  opt.interval = cfg.i0;
  if (cfg.tol) opt.refine_options.tol = *cfg.tol;
  const auto r = eigen_lift(A, cfg.grid, opt);
  io::write_text(out_path(cfg, "eigen.csv"), io::branches_csv(r.lift.grid, r.lift.branches));
  io::write_json(out_path(cfg, "eigen.json"), io::to_json(r));
  log << "eigenvalues: empirical_lip = " << io::detail::fmt(r.lift.empirical_lip)
      << ", weyl_bound = " << io::detail::fmt(r.weyl_bound) << (r.weyl_ok ? "" : " (violated)") << "\n";
  return kOk;
}

inline int run_sos(const RunConfig& cfg, std::ostream& log) {
  const auto f = io::parse_function(io::read_json_file(cfg.input));
  SqrtOptions opt;
  if (cfg.tol) opt.tol = *cfg.tol;
  const auto r = sqrt_lift(f, cfg.grid, opt);
  io::write_text(out_path(cfg, "sqrt.csv"), io::sqrt_csv(r, f));
  io::write_json(out_path(cfg, "sqrt.json"), io::to_json(r));
  log << "sqrt: " << r.flips.size() << " sign flips, empirical_lip = " << io::detail::fmt(r.empirical_lip)
      << ", M = " << io::detail::fmt(r.M) << "\n";
  return kOk;
}

inline io::json check_glaeser(const io::json& cases, const RunConfig& cfg) {
  io::json out = io::json::array();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const std::string path = "glaeser[" + std::to_string(i) + "]";
    const auto f = io::parse_function(cases[i], path);
    if (f.kind() != CoeffCurve::Kind::Polynomial)
      throw Error(ErrorKind::InvalidInput, path + ": Glaeser cases take \"squares\"");
    const Interval I = f.interval();
    double M = 0.0;
    if (cases[i].contains("M")) M = io::detail::number(cases[i]["M"], path + ".M");
    else M = std::sqrt(seminorms(f, I, 2)[0].lip);
    const auto res = glaeser_check(sample(f.components()[0], I, cfg.grid), M, cfg.tol.value_or(1e-9));
    out.push_back({{"M", M},
                   {"checked", res.checked},
                   {"skipped", res.skipped},
                   {"violations", res.violations},
                   {"worst", {{"t", res.worst.t}, {"lhs", res.worst.lhs}, {"rhs", res.worst.rhs}}}});
  }
  return out;
}

inline io::json check_lagrange(const io::json& cases, const RunConfig& cfg) {
  io::json out = io::json::array();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const std::string path = "lagrange[" + std::to_string(i) + "]";
    const auto coeffs = io::detail::numbers(io::detail::field(cases[i], "coeffs", path), path + ".coeffs");
    const double B = io::detail::number(io::detail::field(cases[i], "B", path), path + ".B");
    if (coeffs.empty()) throw Error(ErrorKind::InvalidInput, path + ".coeffs: empty");
    if (!(B > 0.0)) throw Error(ErrorKind::InvalidInput, path + ".B: must be positive");
    const double A = cases[i].contains("A") ? io::detail::number(cases[i]["A"], path + ".A")
                                            : sup_abs(Poly(coeffs), 0.0, B, cfg.grid);
    const auto res = lagrange_coeff_check(coeffs, A, B, cfg.grid);
    out.push_back({{"A", A}, {"B", B}, {"holds", res.holds}, {"bounds", res.bounds}, {"margins", res.margins}});
  }
  return out;
}

inline io::json check_taylor(const io::json& cases, const RunConfig& cfg) {
  io::json out = io::json::array();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const std::string path = "taylor[" + std::to_string(i) + "]";
    const Poly f(io::detail::numbers(io::detail::field(cases[i], "f", path), path + ".f"));
    const Interval I = io::detail::interval(io::detail::field(cases[i], "interval", path), path + ".interval");
    const long m = io::detail::integer(io::detail::field(cases[i], "m", path), path + ".m");
    if (m < 1) throw Error(ErrorKind::InvalidInput, path + ".m: must be >= 1");
    const auto res = taylor_derivative_check(f, I, static_cast<int>(m), cfg.grid);
    out.push_back({{"m", m}, {"holds", res.holds}, {"constant", res.constant}, {"constant_estimate", res.constant_estimate}});
  }
  return out;
}

inline int run_check(const RunConfig& cfg, std::ostream& log) {
  const auto suites = io::read_json_file(cfg.input);
  if (!suites.is_object()) throw Error(ErrorKind::InvalidInput, "check input must be an object");
  const std::vector<std::string> names{"glaeser", "lagrange", "taylor"};
  if (cfg.suite != "all" && std::find(names.begin(), names.end(), cfg.suite) == names.end())
    throw Error(ErrorKind::InvalidParameter, "unknown suite " + cfg.suite);
  io::json out = io::json::object();
  bool any = false;
  for (const auto& name : names) {
    if (cfg.suite != "all" && cfg.suite != name) continue;
    if (!suites.contains(name)) {
      if (cfg.suite == name) throw Error(ErrorKind::InvalidInput, "no \"" + name + "\" cases in " + cfg.input);
      continue;
    }
    const auto& cases = suites[name];
    if (!cases.is_array()) throw Error(ErrorKind::InvalidInput, name + ": expected an array of cases");
    any = true;
    io::json results;
    std::size_t failing = 0;
    if (name == "glaeser") {
      results = check_glaeser(cases, cfg);
      for (const auto& r : results) failing += r["violations"].get<std::size_t>() > 0 ? 1 : 0;
    } else if (name == "lagrange") {
      results = check_lagrange(cases, cfg);
      for (const auto& r : results) failing += r["holds"].get<bool>() ? 0 : 1;
    } else {
      results = check_taylor(cases, cfg);
      for (const auto& r : results) failing += r["holds"].get<bool>() ? 0 : 1;
    }
    out[name] = {{"cases", results.size()}, {"failing", failing}, {"results", results}};
    log << name << ": " << results.size() << " cases, " << failing << " failing\n";
  }
  if (!any) throw Error(ErrorKind::InvalidInput, "no glaeser, lagrange or taylor cases in " + cfg.input);
  io::write_json(out_path(cfg, "check.json"), out);
  return kOk;
}

inline int run_grid2d(const RunConfig& cfg, std::ostream& log) {
  const auto f = io::parse_field(io::read_json_file(cfg.input));
  const auto r = lift_grid_2d(f);
  io::write_json(out_path(cfg, "grid2d.json"), io::to_json(r));
  log << "grid2d: lip_2d = " << io::detail::fmt(r.lip_2d) << ", bound = " << io::detail::fmt(r.bound)
      << (r.ok ? "" : " (exceeded)") << "\n";
  return kOk;
}

}  // namespace detail

/// Runs one command. Returns 0 on success, 2 on invalid input or flags, 3 on numerical failure.
inline int run(const RunConfig& cfg, std::ostream& log = std::cout, std::ostream& err = std::cerr) {
  try {
    if (cfg.grid < 2) throw Error(ErrorKind::InvalidParameter, "--grid must be >= 2");
    if (cfg.mode != "c0" && cfg.mode != "c1") throw Error(ErrorKind::InvalidParameter, "--mode must be c0 or c1");
    detail::require_positive_tol(cfg);
    if (cfg.i0 && cfg.i1 && !cfg.i1->contains(*cfg.i0))
      throw Error(ErrorKind::InvalidParameter, "--i0 must lie inside --i1");
    std::error_code ec;
    std::filesystem::create_directories(cfg.out, ec);
    if (ec) throw Error(ErrorKind::InvalidInput, "cannot create output directory " + cfg.out);
    if (cfg.command == "lift") return detail::run_lift(cfg, log);
    if (cfg.command == "bounds") return detail::run_bounds(cfg, log);
    if (cfg.command == "matrix") return detail::run_matrix(cfg, log);
    if (cfg.command == "sos") return detail::run_sos(cfg, log);
    if (cfg.command == "check") return detail::run_check(cfg, log);
    if (cfg.command == "grid2d") return detail::run_grid2d(cfg, log);
    throw Error(ErrorKind::InvalidParameter, "unknown command " + cfg.command);
  } catch (const Error& e) {
    err << "hyperlift: " << e.what() << "\n";
    return is_numerical(e.kind()) ? kNumerical : kValidation;
  } catch (const io::json::exception& e) {
    err << "hyperlift: invalid-input: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "hyperlift: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace hyperlift::cli
