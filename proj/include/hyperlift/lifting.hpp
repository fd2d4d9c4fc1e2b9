#pragma once

// Continuous and C^1 lifts of curves of hyperbolic polynomials, the cluster reduction
// that localizes the lifting problem, gluing of local lifts, point classification and
// lifts of two-parameter fields.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "assignment.hpp"
#include "curve.hpp"
#include "error.hpp"
#include "interp_bounds.hpp"
#include "lift_result.hpp"
#include "oracle.hpp"
#include "parallel.hpp"
#include "poly_core.hpp"

namespace hyperlift {

struct LiftOptions {
  /// Sub-interval of the curve interval to lift on; the whole interval by default.
  std::optional<Interval> interval;
  bool refine = true;
  RefineOptions refine_options;
};

/// Sorted roots on a uniform grid, refined near kinks.
inline LiftResult lift_sorted(const CoeffCurve& curve, std::size_t grid_size, const LiftOptions& opt = {}) {
  if (grid_size < 2) throw Error(ErrorKind::InvalidParameter, "grid size must be >= 2");
  const Interval I = opt.interval.value_or(curve.interval());
  if (!(I.lo < I.hi) || !curve.interval().contains(I))
    throw Error(ErrorKind::InvalidParameter, "lift interval must be a non-empty part of the curve interval");
  LiftResult L;
  L.mode = LiftMode::C0;
  L.grid = uniform_grid(I, grid_size);
  L.branches = sorted_rows(curve, L.grid);
  update_statistics(L);
  if (opt.refine) L = refine(curve, L, opt.refine_options);
  return L;
}

// ---------------------------------------------------------------------------
// Cluster reduction

struct ClusterTree {
  Interval interval;
  /// indices into the sorted root row at the anchor point
  std::vector<std::size_t> members;
  /// mean of the member roots
  double shift = 0.0;
  /// sqrt of the second power sum of the centered member roots
  double scale = 0.0;
  /// (lambda - shift) / scale; all zero for a collapsed cluster
  std::vector<double> normalized;
  /// partition of members into clusters, one child per cluster
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<ClusterTree> children;

  bool is_leaf() const { return children.empty(); }
  std::size_t degree() const { return members.size(); }
  std::size_t depth() const {
    std::size_t d = 0;
    for (const auto& c : children) d = std::max(d, c.depth());
    return d + 1;
  }
};

namespace detail {

inline ClusterTree build_cluster_node(const std::vector<double>& roots, std::vector<std::size_t> members,
                                      Interval interval, double gap_factor, double tol) {
  ClusterTree node;
  node.interval = interval;
  node.members = std::move(members);
  const std::size_t m = node.members.size();
  double mean = 0.0;
  for (std::size_t idx : node.members) mean += roots[idx];
  mean /= static_cast<double>(m);
  node.shift = mean;
  double p2 = 0.0;
  for (std::size_t idx : node.members) p2 += (roots[idx] - mean) * (roots[idx] - mean);
  node.scale = std::sqrt(p2);
  if (m == 1 || node.scale <= tol * (1.0 + std::abs(mean))) {
    node.scale = m == 1 ? 0.0 : node.scale;
    node.normalized.assign(m, 0.0);
    node.clusters.push_back(node.members);
    return node;
  }
  for (std::size_t idx : node.members) node.normalized.push_back((roots[idx] - mean) / node.scale);
  std::vector<std::size_t> cuts;
  std::size_t widest = 1;
  for (std::size_t k = 1; k < m; ++k) {
    const double gap = node.normalized[k] - node.normalized[k - 1];
    if (gap > gap_factor) cuts.push_back(k);
    if (gap > node.normalized[widest] - node.normalized[widest - 1]) widest = k;
  }
  if (cuts.empty()) cuts.push_back(widest);
  std::size_t start = 0;
  cuts.push_back(m);
  for (std::size_t cut : cuts) {
    std::vector<std::size_t> part(node.members.begin() + static_cast<std::ptrdiff_t>(start),
                                  node.members.begin() + static_cast<std::ptrdiff_t>(cut));
    node.clusters.push_back(part);
    node.children.push_back(build_cluster_node(roots, std::move(part), interval, gap_factor, tol));
    start = cut;
  }
  return node;
}

// Largest window around t0 on which c_1 stays within a factor 2 of c_1(t0) and the
// normalized gaps between the top-level clusters stay above gap_factor / 2.
inline Interval cluster_window(const CoeffCurve& curve, double t0, const std::vector<std::size_t>& cut_positions,
                               double c10, double gap_factor, std::size_t steps = 1024) {
  const Interval I = curve.interval();
  const double h = I.length() / static_cast<double>(steps);
  auto ok = [&](double t) {
    const auto r = sorted_row(curve, t);
    double mean = 0.0;
    for (double x : r) mean += x;
    mean /= static_cast<double>(r.size());
    double c1 = 0.0;
    for (double x : r) c1 += (x - mean) * (x - mean);
    if (!(c1 >= 0.5 * c10 && c1 <= 2.0 * c10)) return false;
    const double s = std::sqrt(c1);
    for (std::size_t k : cut_positions)
      if ((r[k] - r[k - 1]) / s <= 0.5 * gap_factor) return false;
    return true;
  };
  double lo = t0, hi = t0;
  while (lo - h >= I.lo && ok(lo - h)) lo -= h;
  while (hi + h <= I.hi && ok(hi + h)) hi += h;
  return {lo, hi};
}

}  // namespace detail

/// Recursive clustering of the roots at t0: normalize by c_1(t0)^{1/2}, split at normalized
/// gaps above gap_factor (at the widest gap if none qualifies), recenter each cluster and recurse.
inline ClusterTree cluster_reduce(const CoeffCurve& curve, double t0, double gap_factor = 0.5, double tol = 1e-12) {
  if (!(gap_factor > 0.0)) throw Error(ErrorKind::InvalidParameter, "gap_factor must be positive");
  const auto roots = sorted_row(curve, t0);
  double mean = 0.0;
  for (double x : roots) mean += x;
  mean /= static_cast<double>(roots.size());
  double c1 = 0.0;
  for (double x : roots) c1 += (x - mean) * (x - mean);
  if (c1 <= tol * (1.0 + mean * mean))
    throw Error(ErrorKind::CannotReduce, "cannot reduce where the dominant invariant vanishes", t0, c1);
  std::vector<std::size_t> all(roots.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  ClusterTree tree = detail::build_cluster_node(roots, all, {t0, t0}, gap_factor, tol);
  std::vector<std::size_t> cuts;
  for (std::size_t c = 1; c < tree.clusters.size(); ++c) cuts.push_back(tree.clusters[c].front());
  const Interval window = detail::cluster_window(curve, t0, cuts, c1, gap_factor);
  auto assign = [&](auto&& self, ClusterTree& node) -> void {
    node.interval = window;
    for (auto& ch : node.children) self(self, ch);
  };
  assign(assign, tree);
  return tree;
}

/// Roots recovered from the leaves: lambda = shift + scale * v at every leaf, applied bottom-up.
inline std::vector<double> reassemble(const ClusterTree& tree) {
  std::size_t n = 0;
  for (std::size_t idx : tree.members) n = std::max(n, idx + 1);
  std::vector<double> out(n, 0.0);
  auto walk = [&](auto&& self, const ClusterTree& node) -> void {
    if (node.is_leaf()) {
      for (std::size_t k = 0; k < node.members.size(); ++k)
        out[node.members[k]] = node.shift + node.scale * node.normalized[k];
      return;
    }
    for (const auto& ch : node.children) self(self, ch);
  };
  walk(walk, tree);
  std::vector<double> res;
  for (std::size_t idx : tree.members) res.push_back(out[idx]);
  return res;
}

// ---------------------------------------------------------------------------
// Gluing

struct GlueInfo {
  double t12 = 0.0;
  /// left branch i continues as right branch permutation[i]
  std::vector<std::size_t> permutation;
  bool lip_preserved = true;
};

struct GlueOptions {
  /// row multisets must agree within tol * (1 + |row|)
  double tol = 1e-8;
  /// glue at the shared point nearest to this time instead of the widest-gap point
  std::optional<double> at;
};

/// Joins two lifts at a shared grid point of the overlap, relabeling the right lift by the
/// permutation that matches its row to the left row there. Among shared points whose row
/// multisets agree, the one with the widest minimal gap is used.
inline LiftResult glue(const LiftResult& left, const LiftResult& right, Interval overlap,
                       const GlueOptions& opt = {}, GlueInfo* info = nullptr) {
  const double tol = opt.tol;
  if (left.n() != right.n()) throw Error(ErrorKind::IncompatibleLifts, "lifts have different numbers of branches");
  std::optional<std::size_t> best_l, best_r;
  double best_gap = -std::numeric_limits<double>::infinity();
  std::optional<double> first_shared;
  for (std::size_t k = 0; k < left.grid.size(); ++k) {
    const double t = left.grid[k];
    if (!overlap.contains(t)) continue;
    const auto it = std::lower_bound(right.grid.begin(), right.grid.end(), t - 1e-12 * (1.0 + std::abs(t)));
    if (it == right.grid.end() || std::abs(*it - t) > 1e-12 * (1.0 + std::abs(t))) continue;
    const std::size_t j = static_cast<std::size_t>(it - right.grid.begin());
    if (!first_shared) first_shared = t;
    auto a = left.branches[k], b = right.branches[j];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (row_distance(a, b) > tol * (1.0 + row_norm(a))) continue;
    double gap = std::numeric_limits<double>::infinity();
    if (opt.at) gap = -std::abs(t - *opt.at);
    else
      for (std::size_t i = 1; i < a.size(); ++i) gap = std::min(gap, a[i] - a[i - 1]);
    if (gap > best_gap) {
      best_gap = gap;
      best_l = k;
      best_r = j;
    }
  }
  if (!best_l) {
    if (!first_shared)
      throw Error(ErrorKind::IncompatibleLifts, "the lifts share no grid point in the overlap", overlap.lo);
    throw Error(ErrorKind::IncompatibleLifts, "row multisets disagree at every shared point", *first_shared);
  }
  const double t12 = left.grid[*best_l];
  const auto match = solve_assignment(abs_difference_cost(left.branches[*best_l], right.branches[*best_r]));
  LiftResult out;
  out.mode = left.mode == right.mode ? left.mode : LiftMode::C0;
  for (std::size_t k = 0; k <= *best_l; ++k) {
    out.grid.push_back(left.grid[k]);
    out.branches.push_back(left.branches[k]);
  }
  for (std::size_t k = *best_r + 1; k < right.grid.size(); ++k) {
    std::vector<double> row(right.n());
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = right.branches[k][match.col_of_row[i]];
    out.grid.push_back(right.grid[k]);
    out.branches.push_back(std::move(row));
  }
  out.warnings = left.warnings;
  out.warnings.insert(out.warnings.end(), right.warnings.begin(), right.warnings.end());
  update_statistics(out);
  const bool preserved = out.empirical_lip <= std::max(left.empirical_lip, right.empirical_lip) + 1e-9;
  if (!preserved) out.warnings.emplace_back("glued lift exceeds the Lipschitz estimates of its parts");
  if (info) *info = {t12, match.col_of_row, preserved};
  return out;
}

// ---------------------------------------------------------------------------
// C^1 lifts

struct C1Options {
  /// branches closer than collision_tol * (1 + |row|) count as colliding
  double collision_tol = 1e-7;
  /// derivative-jump bound reported against
  double c1_tol = 1e-4;
  /// identity is kept when its derivative-matching cost is within tie_tol * (1 + max|slope|) of the optimum
  double tie_tol = 1e-4;
};

namespace detail {

// 3-point one-sided derivative at nodes[0] from values at nodes[0..2].
inline double one_sided(const double* t, const double* v) {
  const double nodes[3] = {t[0], t[1], t[2]};
  const auto w = fd_weights(std::span<const double>(nodes, 3), t[0], 1);
  return w[0] * v[0] + w[1] * v[1] + w[2] * v[2];
}

inline DerivativeData derivative_data(const std::vector<double>& grid, const std::vector<std::vector<double>>& rows) {
  DerivativeData d;
  const std::size_t N = grid.size(), n = rows.empty() ? 0 : rows[0].size();
  d.derivatives.assign(N, std::vector<double>(n, 0.0));
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t k = 0; k < N; ++k) {
      const std::size_t first = k == 0 ? 0 : (k + 1 == N ? N - 3 : k - 1);
      const double nodes[3] = {grid[first], grid[first + 1], grid[first + 2]};
      const auto w = fd_weights(std::span<const double>(nodes, 3), grid[k], 1);
      d.derivatives[k][b] = w[0] * rows[first][b] + w[1] * rows[first + 1][b] + w[2] * rows[first + 2][b];
    }
    for (std::size_t k = 2; k + 2 < N; ++k) {
      const double tl[3] = {grid[k], grid[k - 1], grid[k - 2]};
      const double vl[3] = {rows[k][b], rows[k - 1][b], rows[k - 2][b]};
      const double tr[3] = {grid[k], grid[k + 1], grid[k + 2]};
      const double vr[3] = {rows[k][b], rows[k + 1][b], rows[k + 2][b]};
      const double jump = std::abs(one_sided(tl, vl) - one_sided(tr, vr));
      if (jump > d.max_derivative_jump) {
        d.max_derivative_jump = jump;
        d.worst_jump_t = grid[k];
      }
    }
  }
  return d;
}

inline double golden_min(const std::function<double(double)>& f, double a, double b, int iters = 80) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters && b - a > 1e-15 * (1.0 + std::abs(a)); ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

}  // namespace detail

/// Sorted lift relabeled at every branch collision so that one-sided derivatives match
/// across it (minimum-cost assignment on slope differences; ties keep sorted order).
inline LiftResult lift_c1(const CoeffCurve& curve, std::size_t grid_size, const C1Options& opt = {},
                          std::optional<Interval> interval = std::nullopt) {
  if (grid_size < 5) throw Error(ErrorKind::InsufficientResolution, "C1 lifting needs at least 5 grid points");
  LiftOptions base_opt;
  base_opt.interval = interval;
  base_opt.refine = false;
  LiftResult L = lift_sorted(curve, grid_size, base_opt);
  const std::size_t N = L.grid.size(), n = L.n();
  const Interval I{L.grid.front(), L.grid.back()};
  const double h = I.length() / static_cast<double>(N - 1);
  auto thr_of = [&](const std::vector<double>& row) { return opt.collision_tol * (1.0 + row_norm(row)); };

  // candidate collisions (time, lower sorted position of the colliding pair)
  std::vector<std::pair<double, std::size_t>> times;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    auto gap = [&](std::size_t k) { return L.branches[k][i + 1] - L.branches[k][i]; };
    for (std::size_t k = 0; k < N; ++k) {
      const double g = gap(k);
      const double gl = k > 0 ? gap(k - 1) : std::numeric_limits<double>::infinity();
      const double gr = k + 1 < N ? gap(k + 1) : std::numeric_limits<double>::infinity();
      if (g > gl || g > gr) continue;
      const double thr = thr_of(L.branches[k]);
      // persistent coincidence: nothing to relabel
      if ((k == 0 || gl <= thr) && (k + 1 == N || gr <= thr)) continue;
      const double slope = std::max(k > 0 ? gl - g : 0.0, k + 1 < N ? gr - g : 0.0);
      if (g > slope + thr) continue;
      const double a = L.grid[k > 0 ? k - 1 : 0], b = L.grid[k + 1 < N ? k + 1 : N - 1];
      auto f = [&](double t) {
        const auto r = sorted_row(curve, t);
        return r[i + 1] - r[i];
      };
      const double ts = detail::golden_min(f, a, b);
      if (f(ts) <= thr_of(sorted_row(curve, ts))) times.emplace_back(ts, i);
    }
  }
  std::sort(times.begin(), times.end());
  // pairs colliding within half a grid step form one event
  std::vector<double> events;
  std::vector<std::vector<char>> pair_flags;
  for (const auto& [t, i] : times) {
    if (events.empty() || t - events.back() > 0.5 * h) {
      events.push_back(t);
      pair_flags.emplace_back(n, 0);
    }
    pair_flags.back()[i] = 1;
  }

  DerivativeData data;
  std::vector<std::size_t> sigma(n);  // branch -> sorted position
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> sigma_after;  // sigma in force after each event
  for (std::size_t e = 0; e < events.size(); ++e) {
    const double ts = events[e];
    const double dist = std::min(ts - I.lo, I.hi - ts);
    if (dist <= 1e-12 * I.length()) {
      sigma_after.push_back(sigma);
      continue;
    }
    const double hs = std::min(h, 0.5 * dist);
    if (!(hs > 1e-14 * (1.0 + std::abs(ts))))
      throw Error(ErrorKind::InsufficientResolution, "cannot form derivative stencils at a collision", ts);
    const auto r0 = sorted_row(curve, ts);
    const auto rm1 = sorted_row(curve, ts - hs), rm2 = sorted_row(curve, ts - 2 * hs);
    const auto rp1 = sorted_row(curve, ts + hs), rp2 = sorted_row(curve, ts + 2 * hs);
    std::size_t p = 0;
    while (p < n) {
      std::size_t q = p;
      while (q + 1 < n && pair_flags[e][q]) ++q;
      if (q > p) {
        Collision c;
        c.t = ts;
        double smax = 0.0;
        for (std::size_t s = p; s <= q; ++s) {
          c.positions.push_back(s);
          c.left_slopes.push_back((3.0 * r0[s] - 4.0 * rm1[s] + rm2[s]) / (2.0 * hs));
          c.right_slopes.push_back((-3.0 * r0[s] + 4.0 * rp1[s] - rp2[s]) / (2.0 * hs));
          smax = std::max({smax, std::abs(c.left_slopes.back()), std::abs(c.right_slopes.back())});
        }
        std::vector<std::vector<double>> cost(c.positions.size(), std::vector<double>(c.positions.size()));
        double identity = 0.0;
        for (std::size_t x = 0; x < c.positions.size(); ++x) {
          for (std::size_t y = 0; y < c.positions.size(); ++y)
            cost[x][y] = std::abs(c.left_slopes[x] - c.right_slopes[y]);
          identity += cost[x][x];
        }
        const auto best = solve_assignment(cost);
        const double tie = opt.tie_tol * (1.0 + smax) * static_cast<double>(c.positions.size());
        for (std::size_t x = 0; x < c.positions.size(); ++x)
          c.matched.push_back(identity <= best.cost + tie ? c.positions[x] : c.positions[best.col_of_row[x]]);
        std::vector<std::size_t> next = sigma;
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t x = 0; x < c.positions.size(); ++x)
            if (sigma[b] == c.positions[x]) next[b] = c.matched[x];
        sigma = std::move(next);
        data.collisions.push_back(std::move(c));
      }
      p = q + 1;
    }
    sigma_after.push_back(sigma);
  }
  std::vector<std::size_t> current(n);
  std::iota(current.begin(), current.end(), std::size_t{0});
  std::size_t ev = 0;
  for (std::size_t k = 0; k < N; ++k) {
    while (ev < events.size() && events[ev] < L.grid[k]) current = sigma_after[ev++];
    std::vector<double> row(n);
    for (std::size_t b = 0; b < n; ++b) row[b] = L.branches[k][current[b]];
    L.branches[k] = std::move(row);
  }
  auto dd = detail::derivative_data(L.grid, L.branches);
  dd.collisions = std::move(data.collisions);
  L.mode = LiftMode::C1;
  update_statistics(L);
  if (dd.max_derivative_jump > opt.c1_tol) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "derivative jump %.3g exceeds %.3g near t = %.17g", dd.max_derivative_jump,
                  opt.c1_tol, dd.worst_jump_t);
    L.warnings.emplace_back(buf);
  }
  L.derivative_data = std::move(dd);
  return L;
}

// ---------------------------------------------------------------------------
// Point classification

enum class PointCase { Case0, Case1, Case2 };

inline const char* to_string(PointCase c) {
  switch (c) {
    case PointCase::Case0: return "Case0";
    case PointCase::Case1: return "Case1";
    case PointCase::Case2: return "Case2";
  }
  return "?";
}

struct PointClass {
  double t = 0.0;
  PointCase kind = PointCase::Case0;
  double c1 = 0.0, c1_prime = 0.0, c1_second = 0.0;
};

/// Case0: c_1(t) > tol; Case1: c_1 <= tol and |c_1''| > tol; Case2: flat zero.
inline PointClass classify_point(const CoeffCurve& curve, double t, double tol = 1e-12) {
  const CoeffCurve dom = curve.is_elementary() ? dominant_system(curve) : curve;
  PointClass pc;
  pc.t = t;
  pc.c1 = dom.derivative(0, t, 0);
  pc.c1_prime = dom.derivative(0, t, 1);
  pc.c1_second = dom.derivative(0, t, 2);
  if (pc.c1 > tol) pc.kind = PointCase::Case0;
  else if (std::abs(pc.c1_second) > tol) pc.kind = PointCase::Case1;
  else pc.kind = PointCase::Case2;
  return pc;
}

// ---------------------------------------------------------------------------
// Two-parameter fields

struct Field2D {
  std::vector<double> x, y;
  /// values[ix][iy] = (e_1, ..., e_n) at (x[ix], y[iy])
  std::vector<std::vector<std::vector<double>>> values;
};

struct Grid2DResult {
  std::vector<double> x, y;
  /// lift[ix][iy][branch]
  std::vector<std::vector<std::vector<double>>> lift;
  double lip_x = 0.0;
  double lip_y = 0.0;
  /// max(lip_x, lip_y) * sqrt(2)
  double bound = 0.0;
  double lip_2d = 0.0;
  bool ok = true;
};

/// Lifts a sampled field over a rectangle: sorted roots along each row, rows glued by
/// column-wise permutation matching; compares the 2-D Lipschitz estimate with sqrt(2)
/// times the largest per-axis estimate.
inline Grid2DResult lift_grid_2d(const Field2D& f) {
  const std::size_t nx = f.x.size(), ny = f.y.size();
  if (nx < 2 || ny < 2) throw Error(ErrorKind::InvalidInput, "field needs at least 2 nodes per axis");
  if (f.values.size() != nx) throw Error(ErrorKind::InvalidInput, "values must have one entry per x node");
  for (std::size_t i = 1; i < nx; ++i)
    if (!(f.x[i] > f.x[i - 1])) throw Error(ErrorKind::InvalidInput, "x nodes must increase strictly");
  for (std::size_t j = 1; j < ny; ++j)
    if (!(f.y[j] > f.y[j - 1])) throw Error(ErrorKind::InvalidInput, "y nodes must increase strictly");
  Grid2DResult out;
  out.x = f.x;
  out.y = f.y;
  out.lift.assign(nx, std::vector<std::vector<double>>(ny));
  const std::size_t n = f.values[0].empty() ? 0 : f.values[0][0].size();
  parallel_for(nx * ny, [&](std::size_t idx) {
    const std::size_t ix = idx / ny, iy = idx % ny;
    if (f.values[ix].size() != ny || f.values[ix][iy].size() != n)
      throw Error(ErrorKind::InvalidInput, "field values have inconsistent shape");
    try {
      out.lift[ix][iy] = roots(HyperbolicPoly(f.values[ix][iy])).values();
    } catch (const Error& e) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "not hyperbolic at node (x, y) = (%.17g, %.17g)", f.x[ix], f.y[iy]);
      throw Error(e.kind(), buf, f.x[ix], e.witness());
    }
  });
  // glue row iy+1 to row iy (rows are lines of constant y)
  for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
    std::vector<double> a(n), b(n);
    for (std::size_t k = 0; k < n; ++k) {
      a[k] = out.lift[0][iy][k];
      b[k] = out.lift[0][iy + 1][k];
    }
    const auto perm = solve_assignment(abs_difference_cost(a, b)).col_of_row;
    for (std::size_t ix = 0; ix < nx; ++ix) {
      std::vector<double> row(n);
      for (std::size_t k = 0; k < n; ++k) row[k] = out.lift[ix][iy + 1][perm[k]];
      const auto best = solve_assignment(abs_difference_cost(out.lift[ix][iy], out.lift[ix][iy + 1]));
      double chosen = 0.0;
      for (std::size_t k = 0; k < n; ++k) chosen += std::abs(out.lift[ix][iy][k] - row[k]);
      if (chosen > best.cost + 1e-12 * (1.0 + best.cost)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "row gluing is inconsistent at node (x, y) = (%.17g, %.17g)", f.x[ix],
                      f.y[iy + 1]);
        throw Error(ErrorKind::IncompatibleLifts, buf, f.x[ix]);
      }
      out.lift[ix][iy + 1] = std::move(row);
    }
  }
  for (std::size_t ix = 0; ix < nx; ++ix)
    for (std::size_t iy = 0; iy < ny; ++iy) {
      if (ix + 1 < nx)
        out.lip_x = std::max(out.lip_x, row_distance(out.lift[ix + 1][iy], out.lift[ix][iy]) / (f.x[ix + 1] - f.x[ix]));
      if (iy + 1 < ny)
        out.lip_y = std::max(out.lip_y, row_distance(out.lift[ix][iy + 1], out.lift[ix][iy]) / (f.y[iy + 1] - f.y[iy]));
    }
  out.bound = std::max(out.lip_x, out.lip_y) * std::sqrt(2.0);
  auto ratio = [&](std::size_t i1, std::size_t j1, std::size_t i2, std::size_t j2) {
    const double dist = std::hypot(f.x[i2] - f.x[i1], f.y[j2] - f.y[j1]);
    return row_distance(out.lift[i1][j1], out.lift[i2][j2]) / dist;
  };
  if (nx * ny <= 2500) {
    for (std::size_t a = 0; a < nx * ny; ++a)
      for (std::size_t b = a + 1; b < nx * ny; ++b)
        out.lip_2d = std::max(out.lip_2d, ratio(a / ny, a % ny, b / ny, b % ny));
  } else {
    for (std::size_t ix = 0; ix < nx; ++ix)
      for (std::size_t iy = 0; iy < ny; ++iy) {
        if (ix + 1 < nx) out.lip_2d = std::max(out.lip_2d, ratio(ix, iy, ix + 1, iy));
        if (iy + 1 < ny) out.lip_2d = std::max(out.lip_2d, ratio(ix, iy, ix, iy + 1));
        if (ix + 1 < nx && iy + 1 < ny) out.lip_2d = std::max(out.lip_2d, ratio(ix, iy, ix + 1, iy + 1));
        if (ix + 1 < nx && iy > 0) out.lip_2d = std::max(out.lip_2d, ratio(ix, iy, ix + 1, iy - 1));
      }
  }
  out.ok = out.lip_2d <= out.bound * (1.0 + 1e-6) + 1e-12;
  return out;
}

// ---------------------------------------------------------------------------
// Bound report

/// compute_A on the dominant system of an elementary curve, plus the empirical Lipschitz
/// constant of the sorted lift on I0 and their ratio.
inline BoundReport bound_report(const CoeffCurve& curve, Interval I0, Interval I1, std::size_t grid_size = 4096,
                                std::size_t samples = 4096) {
  BoundReport rep = compute_A(dominant_system(curve), I0, I1, samples);
  LiftOptions opt;
  opt.interval = I0;
  rep.empirical_lip = lift_sorted(curve, grid_size, opt).empirical_lip;
  if (rep.bound_expr > 0.0) rep.ratio = rep.empirical_lip / rep.bound_expr;
  else rep.ratio = rep.empirical_lip == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace hyperlift
