#pragma once

// Brute-force reference lifts and adaptive refinement.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "assignment.hpp"
#include "curve.hpp"
#include "lift_result.hpp"
#include "parallel.hpp"

namespace hyperlift {

struct MatchingLift {
  std::vector<double> grid;
  std::vector<std::vector<double>> branches;
  /// permutations[k][i]: sorted index at step k+1 taken by branch i
  std::vector<std::vector<std::size_t>> permutations;
  /// total displacement sum_i |lambda_i(t_{k+1}) - lambda_i(t_k)| per step
  std::vector<double> step_costs;

  double total_cost() const { return std::accumulate(step_costs.begin(), step_costs.end(), 0.0); }
};

/// Roots at every point of a uniform grid, consecutive rows matched by a minimum-cost
/// assignment on |lambda_i - mu_j|. The optimum must equal the cost of matching sorted
/// to sorted; a violation throws std::logic_error.
inline MatchingLift brute_force_lift(const CoeffCurve& curve, std::size_t grid_size) {
  if (grid_size < 1) throw Error(ErrorKind::InvalidParameter, "grid size must be >= 1");
  MatchingLift out;
  out.grid = grid_size == 1 ? std::vector<double>{curve.interval().lo} : uniform_grid(curve.interval(), grid_size);
  std::vector<std::vector<double>> raw(out.grid.size());
  parallel_for(out.grid.size(), [&](std::size_t k) { raw[k] = roots_at(curve, out.grid[k]); });
  out.branches.push_back(raw[0]);
  for (std::size_t k = 1; k < raw.size(); ++k) {
    const auto& prev = out.branches.back();
    const auto& cur = raw[k];
    const auto a = solve_assignment(abs_difference_cost(prev, cur));
    std::vector<double> sp = prev;
    std::sort(sp.begin(), sp.end());
    double sorted_cost = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) sorted_cost += std::abs(sp[i] - cur[i]);
    if (std::abs(a.cost - sorted_cost) > 1e-12 * (1.0 + sorted_cost))
      throw std::logic_error("assignment optimum differs from the sorted matching");
    std::vector<double> row(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) row[i] = cur[a.col_of_row[i]];
    out.permutations.push_back(a.col_of_row);
    out.step_costs.push_back(a.cost);
    out.branches.push_back(std::move(row));
  }
  return out;
}

inline double empirical_lip(const MatchingLift& L, LipMode mode = LipMode::Consecutive) {
  return empirical_lip(L.grid, L.branches, mode);
}

struct RefineOptions {
  double tol = 1e-3;
  int max_depth = 20;
};

/// Bisects grid intervals where the lift at the midpoint departs from the average of the
/// endpoint rows by more than tol * Lip * h0 (h0 the mean initial spacing). Kinks resolve
/// after finitely many levels; jumps that survive max_depth are reported as warnings.
inline LiftResult refine(const CoeffCurve& curve, const LiftResult& L, RefineOptions opt = {}) {
  LiftResult out = L;
  const std::size_t N = L.grid.size();
  if (N < 3 || L.mode != LiftMode::C0) return out;
  const double h0 = (L.grid.back() - L.grid.front()) / static_cast<double>(N - 1);
  const double lip = L.empirical_lip;
  if (!(lip > 0.0)) return out;
  const double threshold = opt.tol * lip * h0;
  // attainable accuracy of a root row: eps-relative for separated roots, growing like
  // eps / gap as roots close up, up to sqrt(eps) for coincident ones
  auto floor_of = [](const std::vector<double>& r) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double s = 1.0 + row_norm(r);
    double gap = s;
    for (std::size_t i = 1; i < r.size(); ++i) gap = std::min(gap, r[i] - r[i - 1]);
    return 4.0 * eps * s * s / std::max(gap, std::sqrt(eps) * s);
  };

  // second differences flag the intervals worth probing
  std::vector<double> d2(N, 0.0);
  for (std::size_t k = 1; k + 1 < N; ++k) {
    double m = 0.0;
    for (std::size_t i = 0; i < L.n(); ++i)
      m = std::max(m, std::abs(L.branches[k + 1][i] - 2.0 * L.branches[k][i] + L.branches[k - 1][i]));
    d2[k] = m;
  }
  struct Span {
    double a, b;
    std::vector<double> ra, rb;
    int depth;
  };
  std::vector<Span> work;
  for (std::size_t k = 0; k + 1 < N; ++k) {
    const double s = std::max(d2[k], d2[k + 1]);
    if (s > 2.0 * threshold + 4.0 * std::max(floor_of(L.branches[k]), floor_of(L.branches[k + 1])))
      work.push_back({L.grid[k], L.grid[k + 1], L.branches[k], L.branches[k + 1], 0});
  }
  std::vector<std::pair<double, std::vector<double>>> added;
  std::vector<double> unresolved;
  while (!work.empty()) {
    std::vector<std::vector<double>> mids(work.size());
    parallel_for(work.size(), [&](std::size_t w) { mids[w] = sorted_row(curve, 0.5 * (work[w].a + work[w].b)); });
    std::vector<Span> next;
    for (std::size_t w = 0; w < work.size(); ++w) {
      const Span& s = work[w];
      const double m = 0.5 * (s.a + s.b);
      double dev = 0.0;
      for (std::size_t i = 0; i < s.ra.size(); ++i)
        dev = std::max(dev, std::abs(mids[w][i] - 0.5 * (s.ra[i] + s.rb[i])));
      const double noise = std::max({floor_of(s.ra), floor_of(s.rb), floor_of(mids[w])});
      if (dev <= threshold + 2.0 * noise || !(m > s.a && m < s.b)) continue;
      // a midpoint closer than the noise allows would distort the chord slopes
      if (4.0 * noise > opt.tol * lip * (m - s.a)) continue;
      added.emplace_back(m, mids[w]);
      if (s.depth + 1 >= opt.max_depth) {
        unresolved.push_back(m);
        continue;
      }
      next.push_back({s.a, m, s.ra, mids[w], s.depth + 1});
      next.push_back({m, s.b, mids[w], s.rb, s.depth + 1});
    }
    work = std::move(next);
  }
  if (!added.empty()) {
    std::vector<std::pair<double, std::vector<double>>> all;
    all.reserve(N + added.size());
    for (std::size_t k = 0; k < N; ++k) all.emplace_back(L.grid[k], L.branches[k]);
    for (auto& a : added) all.push_back(std::move(a));
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    out.grid.clear();
    out.branches.clear();
    for (auto& [t, r] : all) {
      out.grid.push_back(t);
      out.branches.push_back(std::move(r));
    }
  }
  std::sort(unresolved.begin(), unresolved.end());
  double last = -std::numeric_limits<double>::infinity();
  for (double t : unresolved) {
    if (t - last < h0) continue;
    char buf[96];
    std::snprintf(buf, sizeof buf, "unresolved jump near t = %.17g", t);
    out.warnings.emplace_back(buf);
    last = t;
  }
  update_statistics(out);
  return out;
}

}  // namespace hyperlift
