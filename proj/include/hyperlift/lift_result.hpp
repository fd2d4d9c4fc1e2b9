#pragma once

// Sampled lifts t -> (lambda_1(t), ..., lambda_n(t)) and finite-sample Lipschitz estimates.
// Displacements are measured in the max norm over branches.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "curve.hpp"
#include "error.hpp"
#include "parallel.hpp"

namespace hyperlift {

enum class LiftMode { C0, C1 };

inline const char* to_string(LiftMode m) { return m == LiftMode::C0 ? "C0" : "C1"; }

struct Collision {
  double t = 0.0;
  /// sorted positions involved
  std::vector<std::size_t> positions;
  /// left sorted position positions[k] continues at right sorted position matched[k]
  std::vector<std::size_t> matched;
  std::vector<double> left_slopes;
  std::vector<double> right_slopes;
};

struct DerivativeData {
  /// per-row, per-branch derivative estimates (3-point stencils on the grid)
  std::vector<std::vector<double>> derivatives;
  /// max over interior rows and branches of |one-sided left - one-sided right derivative|
  double max_derivative_jump = 0.0;
  double worst_jump_t = 0.0;
  std::vector<Collision> collisions;
};

struct LiftResult {
  std::vector<double> grid;
  /// row k is the lift at grid[k]
  std::vector<std::vector<double>> branches;
  LiftMode mode = LiftMode::C0;
  double max_jump = 0.0;
  double empirical_lip = 0.0;
  std::optional<DerivativeData> derivative_data;
  std::vector<std::string> warnings;

  std::size_t n() const { return branches.empty() ? 0 : branches.front().size(); }
};

inline double row_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double row_norm(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

enum class LipMode { Consecutive, AllPairs };

inline constexpr std::size_t kAllPairsLimit = 2000;

/// Lipschitz estimate of sampled branch data: consecutive steps, or all pairs (N <= 2000).
inline double empirical_lip(const std::vector<double>& grid, const std::vector<std::vector<double>>& rows,
                            LipMode mode = LipMode::Consecutive) {
  const std::size_t N = grid.size();
  if (N < 2 || rows.size() != N) throw Error(ErrorKind::InvalidInput, "empirical_lip needs at least 2 grid points");
  double lip = 0.0;
  if (mode == LipMode::Consecutive) {
    for (std::size_t k = 0; k + 1 < N; ++k)
      lip = std::max(lip, row_distance(rows[k + 1], rows[k]) / (grid[k + 1] - grid[k]));
    return lip;
  }
  if (N > kAllPairsLimit) throw Error(ErrorKind::InvalidParameter, "all-pairs mode is limited to 2000 points");
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = a + 1; b < N; ++b)
      lip = std::max(lip, row_distance(rows[b], rows[a]) / (grid[b] - grid[a]));
  return lip;
}

inline double empirical_lip(const LiftResult& L, LipMode mode = LipMode::Consecutive) {
  return empirical_lip(L.grid, L.branches, mode);
}

/// Lipschitz estimate restricted to the grid points inside K.
inline double local_lip(const LiftResult& L, Interval K) {
  std::vector<double> g;
  std::vector<std::vector<double>> r;
  for (std::size_t k = 0; k < L.grid.size(); ++k)
    if (K.contains(L.grid[k])) {
      g.push_back(L.grid[k]);
      r.push_back(L.branches[k]);
    }
  return g.size() < 2 ? 0.0 : empirical_lip(g, r);
}

/// Recomputes max_jump and empirical_lip from the rows.
inline void update_statistics(LiftResult& L) {
  L.max_jump = 0.0;
  for (std::size_t k = 0; k + 1 < L.grid.size(); ++k)
    L.max_jump = std::max(L.max_jump, row_distance(L.branches[k + 1], L.branches[k]));
  L.empirical_lip = L.grid.size() >= 2 ? empirical_lip(L) : 0.0;
}

/// Sorted roots at t. Where the centered polynomial vanishes identically the row is the
/// constant shift (the zero lift of the centered part).
inline std::vector<double> sorted_row(const CoeffCurve& curve, double t) {
  const auto [shift, e] = curve.centered(t);
  if (std::all_of(e.begin(), e.end(), [](double x) { return x == 0.0; }))
    return std::vector<double>(e.size(), shift);
  return roots_at(curve, t);
}

/// Sorted rows at every point of the grid (parallel over points, deterministic).
inline std::vector<std::vector<double>> sorted_rows(const CoeffCurve& curve, const std::vector<double>& grid) {
  std::vector<std::vector<double>> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) { rows[k] = sorted_row(curve, grid[k]); });
  return rows;
}

}  // namespace hyperlift
