#pragma once

// JSON readers for curves, matrix curves, functions and fields; JSON/CSV writers for results.

#include <json.hpp>

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "applications.hpp"
#include "curve.hpp"
#include "error.hpp"
#include "interp_bounds.hpp"
#include "lifting.hpp"

namespace hyperlift::io {

using nlohmann::json;

namespace detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::InvalidInput, path + ": " + what);
}

inline const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing field \"") + key + "\"");
  return *it;
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "non-finite number");
  return v;
}

inline long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

inline std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

inline Interval interval(const json& j, const std::string& path) {
  const auto v = numbers(j, path);
  if (v.size() != 2) fail(path, "interval must be [a, b]");
  if (!(v[0] < v[1])) fail(path, "interval must satisfy a < b");
  return {v[0], v[1]};
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open input file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, "malformed JSON in " + path + ": " + e.what());
  }
}

/// {"n", "degrees", "interval", "rep": {"poly_t": [[...]]} | {"grid": [...], "values": [[...]]}}
inline CoeffCurve parse_curve(const json& j, const std::string& path = "curve") {
  using namespace detail;
  const long n = integer(field(j, "n", path), path + ".n");
  if (n < 1) fail(path + ".n", "must be >= 1");
  std::vector<int> degrees;
  if (j.contains("degrees")) {
    const auto& d = j["degrees"];
    if (!d.is_array() || d.size() != static_cast<std::size_t>(n)) fail(path + ".degrees", "must list n degrees");
    for (std::size_t i = 0; i < d.size(); ++i) {
      const long v = integer(d[i], path + ".degrees[" + std::to_string(i) + "]");
      if (v < 1) fail(path + ".degrees", "degrees must be >= 1");
      degrees.push_back(static_cast<int>(v));
    }
  }
  const Interval I = interval(field(j, "interval", path), path + ".interval");
  const auto& rep = field(j, "rep", path);
  if (rep.contains("poly_t")) {
    const auto& p = rep["poly_t"];
    if (!p.is_array() || p.size() != static_cast<std::size_t>(n)) fail(path + ".rep.poly_t", "must list n polynomials");
    std::vector<Poly> comps;
    for (std::size_t i = 0; i < p.size(); ++i)
      comps.emplace_back(numbers(p[i], path + ".rep.poly_t[" + std::to_string(i) + "]"));
    return CoeffCurve::polynomial(std::move(comps), I, degrees);
  }
  if (rep.contains("grid")) {
    auto grid = numbers(rep["grid"], path + ".rep.grid");
    const auto& vals = field(rep, "values", path + ".rep");
    if (!vals.is_array() || vals.size() != grid.size()) fail(path + ".rep.values", "need one row per grid point");
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < vals.size(); ++k) {
      rows.push_back(numbers(vals[k], path + ".rep.values[" + std::to_string(k) + "]"));
      if (rows.back().size() != static_cast<std::size_t>(n))
        fail(path + ".rep.values[" + std::to_string(k) + "]", "need n values");
    }
    try {
      return CoeffCurve::sampled(std::move(grid), std::move(rows), I, degrees);
    } catch (const Error& e) {
      fail(path + ".rep", e.what());
    }
  }
  fail(path + ".rep", "expected \"poly_t\" or \"grid\"/\"values\"");
}

/// {"m", "interval", "entries": [[[coeffs]...]...]}; rows may list the full row or only the
/// upper triangle from the diagonal on; null entries are mirrored.
inline SymMatrixCurve parse_matrix(const json& j, const std::string& path = "matrix") {
  using namespace detail;
  SymMatrixCurve A;
  const long m = integer(field(j, "m", path), path + ".m");
  if (m < 1) fail(path + ".m", "must be >= 1");
  A.m = static_cast<int>(m);
  A.interval = interval(field(j, "interval", path), path + ".interval");
  const auto& rows = field(j, "entries", path);
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(m)) fail(path + ".entries", "need m rows");
  const std::size_t M = static_cast<std::size_t>(m);
  std::vector<std::vector<std::optional<Poly>>> e(M, std::vector<std::optional<Poly>>(M));
  for (std::size_t i = 0; i < M; ++i) {
    const auto& row = rows[i];
    const std::string rp = path + ".entries[" + std::to_string(i) + "]";
    if (!row.is_array()) fail(rp, "expected an array");
    std::size_t first;
    if (row.size() == M) first = 0;
    else if (row.size() == M - i) first = i;
    else fail(rp, "row must have m entries or the m - i upper-triangle entries");
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k].is_null()) continue;
      e[i][first + k] = Poly(numbers(row[k], rp + "[" + std::to_string(k) + "]"));
    }
  }
  A.entries.assign(M, std::vector<Poly>(M));
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t k = 0; k < M; ++k) {
      if (e[i][k]) A.entries[i][k] = *e[i][k];
      else if (e[k][i]) A.entries[i][k] = *e[k][i];
      else fail(path + ".entries", "entry (" + std::to_string(i) + ", " + std::to_string(k) + ") is missing");
    }
  A.validate();
  return A;
}

/// {"squares": [[coeffs]...], "interval"} or {"grid", "values": [f...], "interval"}.
inline CoeffCurve parse_function(const json& j, const std::string& path = "function") {
  using namespace detail;
  const Interval I = interval(field(j, "interval", path), path + ".interval");
  if (j.contains("squares")) {
    const auto& sq = j["squares"];
    if (!sq.is_array() || sq.empty()) fail(path + ".squares", "expected a non-empty array of polynomials");
    std::vector<Poly> polys;
    for (std::size_t i = 0; i < sq.size(); ++i)
      polys.emplace_back(numbers(sq[i], path + ".squares[" + std::to_string(i) + "]"));
    return sum_of_squares(polys, I);
  }
  if (j.contains("grid")) {
    auto grid = numbers(j["grid"], path + ".grid");
    const auto vals = numbers(field(j, "values", path), path + ".values");
    if (vals.size() != grid.size()) fail(path + ".values", "need one value per grid point");
    std::vector<std::vector<double>> rows;
    for (double v : vals) rows.push_back({v});
    try {
      return CoeffCurve::sampled(std::move(grid), std::move(rows), I, {2});
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }
  fail(path, "expected \"squares\" or \"grid\"/\"values\"");
}

/// {"n", "x", "y", "values": [x][y][e]}
inline Field2D parse_field(const json& j, const std::string& path = "field") {
  using namespace detail;
  const long n = integer(field(j, "n", path), path + ".n");
  if (n < 1) fail(path + ".n", "must be >= 1");
  Field2D f;
  f.x = numbers(field(j, "x", path), path + ".x");
  f.y = numbers(field(j, "y", path), path + ".y");
  const auto& v = field(j, "values", path);
  if (!v.is_array() || v.size() != f.x.size()) fail(path + ".values", "need one entry per x node");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_array() || v[i].size() != f.y.size()) fail(path + ".values", "need one entry per y node");
    std::vector<std::vector<double>> col;
    for (std::size_t k = 0; k < v[i].size(); ++k) {
      const std::string p = path + ".values[" + std::to_string(i) + "][" + std::to_string(k) + "]";
      col.push_back(numbers(v[i][k], p));
      if (col.back().size() != static_cast<std::size_t>(n)) fail(p, "need n values");
    }
    f.values.push_back(std::move(col));
  }
  return f;
}

// ---------------------------------------------------------------------------
// writers

inline json to_json(Interval I) { return json::array({I.lo, I.hi}); }

inline std::string branches_csv(const std::vector<double>& grid, const std::vector<std::vector<double>>& rows) {
  std::string out = "t";
  const std::size_t n = rows.empty() ? 0 : rows[0].size();
  for (std::size_t i = 1; i <= n; ++i) out += ",branch_" + std::to_string(i);
  out += '\n';
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out += detail::fmt(grid[k]);
    for (double v : rows[k]) out += ',' + detail::fmt(v);
    out += '\n';
  }
  return out;
}

inline json to_json(const LiftResult& L) {
  json j;
  j["mode"] = to_string(L.mode);
  j["n"] = L.n();
  j["grid_size"] = L.grid.size();
  j["interval"] = L.grid.empty() ? json(nullptr) : json::array({L.grid.front(), L.grid.back()});
  j["max_jump"] = L.max_jump;
  j["empirical_lip"] = L.empirical_lip;
  j["warnings"] = L.warnings;
  if (L.derivative_data) {
    const auto& d = *L.derivative_data;
    json dd;
    dd["max_derivative_jump"] = d.max_derivative_jump;
    dd["worst_jump_t"] = d.worst_jump_t;
    json cs = json::array();
    for (const auto& c : d.collisions)
      cs.push_back({{"t", c.t},
                    {"positions", c.positions},
                    {"matched", c.matched},
                    {"left_slopes", c.left_slopes},
                    {"right_slopes", c.right_slopes}});
    dd["collisions"] = cs;
    j["derivative_data"] = dd;
  }
  return j;
}

inline json to_json(const SeminormEstimate& s) {
  return {{"component", s.component},
          {"derivative_sups", s.derivative_sups},
          {"lip", s.lip},
          {"method", s.method == SeminormMethod::ExactPolynomial ? "exact" : "finite-difference"},
          {"samples", s.samples}};
}

/// Non-finite values serialize as null.
inline json to_json(const BoundReport& r) {
  json sn = json::array();
  for (const auto& s : r.seminorms) sn.push_back(to_json(s));
  return {{"I0", to_json(r.I0)},     {"I1", to_json(r.I1)},
          {"delta", r.delta},        {"d", r.d},
          {"seminorms", sn},         {"M", r.M},
          {"A1", r.A1},              {"A2", r.A2},
          {"A0", r.A0},              {"bound_expr", r.bound_expr},
          {"alt_bound", r.alt_bound}, {"empirical_lip", r.empirical_lip},
          {"ratio", std::isfinite(r.ratio) ? json(r.ratio) : json(nullptr)}};
}

inline json to_json(const AssumptionReport& a) {
  return {{"A1_ok", a.A1_ok},
          {"A2_ok", a.A2_ok},
          {"A3_ok", a.A3_ok},
          {"points_checked", a.points_checked},
          {"doubling_factor", a.doubling_factor},
          {"derivative_constant", a.derivative_constant}};
}

inline json to_json(const EigenLift& e) {
  json j = to_json(e.lift);
  j["weyl_bound"] = e.weyl_bound;
  j["weyl_ok"] = e.weyl_ok;
  return j;
}

inline json to_json(const SignedSqrtLift& s) {
  return {{"grid_size", s.grid.size()}, {"flips", s.flips},   {"empirical_lip", s.empirical_lip},
          {"max_jump", s.max_jump},     {"residual", s.residual}, {"M", s.M},
          {"lip_ok", s.lip_ok}};
}

inline std::string sqrt_csv(const SignedSqrtLift& s, const CoeffCurve& f) {
  std::string out = "t,g,f\n";
  for (std::size_t k = 0; k < s.grid.size(); ++k)
    out += detail::fmt(s.grid[k]) + ',' + detail::fmt(s.g[k]) + ',' + detail::fmt(f.value(s.grid[k])[0]) + '\n';
  return out;
}

inline json to_json(const Grid2DResult& r) {
  return {{"x", r.x},         {"y", r.y},     {"lift", r.lift},     {"lip_x", r.lip_x},
          {"lip_y", r.lip_y}, {"lip_2d", r.lip_2d}, {"bound", r.bound}, {"ok", r.ok}};
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  out << text;
}

inline void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace hyperlift::io
