#include <hyperlift/lifting.hpp>
#include <hyperlift/oracle.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "test_support.hpp"

using namespace hyperlift;
using hyperlift::testing::curve_from_root_polys;

namespace {

const Interval kUnit{-1.0, 1.0};

// exhaustive minimum over all permutations
double brute_min_cost(const std::vector<std::vector<double>>& c) {
  std::vector<std::size_t> p(c.size());
  std::iota(p.begin(), p.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += c[i][p[i]];
    best = std::min(best, s);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

}  // namespace

TEST(Assignment, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 7;
    std::vector<std::vector<double>> c(n, std::vector<double>(n));
    for (auto& row : c)
      for (auto& x : row) x = trial % 3 == 0 ? std::round(u(rng)) : u(rng);
    const auto a = solve_assignment(c);
    std::vector<std::size_t> cols = a.col_of_row;
    std::sort(cols.begin(), cols.end());
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(cols[i], i);
    EXPECT_NEAR(a.cost, brute_min_cost(c), 1e-12);
  }
}

TEST(Assignment, EmptyAndNonSquare) {
  EXPECT_EQ(solve_assignment({}).cost, 0.0);
  EXPECT_THROW(solve_assignment({{1.0, 2.0}}), std::invalid_argument);
}

TEST(Assignment, RealValuesMatchSortedOrder) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(6), b(6);
    for (auto& x : a) x = g(rng);
    for (auto& x : b) x = g(rng);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double sorted_cost = 0.0;
    for (std::size_t i = 0; i < 6; ++i) sorted_cost += std::abs(a[i] - b[i]);
    EXPECT_NEAR(solve_assignment(abs_difference_cost(a, b)).cost, sorted_cost, 1e-12);
  }
}

TEST(BruteForce, TranslatedRootsMatchSortedLift) {
  const auto c = curve_from_root_polys({Poly{-1.0, 1.0}, Poly{1.0, 1.0}}, kUnit);
  const auto M = brute_force_lift(c, 10000);
  LiftOptions opt;
  opt.refine = false;
  const auto L = lift_sorted(c, 10000, opt);
  EXPECT_EQ(M.grid, L.grid);
  EXPECT_EQ(M.branches, L.branches);
  EXPECT_NEAR(empirical_lip(M), 1.0, 1e-9);
}

TEST(BruteForce, KinkedPairMatchesAsMultisets) {
  const auto c = curve_from_root_polys({Poly{0.0, 3.0}, Poly{0.0, -1.0}}, kUnit);
  const auto M = brute_force_lift(c, 10000);
  LiftOptions opt;
  opt.refine = false;
  const auto L = lift_sorted(c, 10000, opt);
  for (std::size_t k = 0; k < M.grid.size(); ++k) {
    auto row = M.branches[k];
    std::sort(row.begin(), row.end());
    EXPECT_EQ(row, L.branches[k]);
  }
  for (const auto& p : M.permutations) {
    auto q = p;
    std::sort(q.begin(), q.end());
    EXPECT_EQ(q, (std::vector<std::size_t>{0, 1}));
  }
  EXPECT_NEAR(empirical_lip(M), 3.0, 1e-9);
}

TEST(BruteForce, SinglePointGrid) {
  const auto c = curve_from_root_polys({Poly{0.0, 1.0}, Poly{2.0}}, kUnit);
  const auto M = brute_force_lift(c, 1);
  EXPECT_EQ(M.branches.size(), 1u);
  EXPECT_EQ(M.total_cost(), 0.0);
  EXPECT_THROW(empirical_lip(M), Error);
}

TEST(EmpiricalLip, ExamplesAndModes) {
  const std::vector<double> grid = uniform_grid(kUnit, 101);
  std::vector<std::vector<double>> trans, kink, flat;
  for (double t : grid) {
    trans.push_back({t - 1.0, t + 1.0});
    kink.push_back({std::min(3.0 * t, -t), std::max(3.0 * t, -t)});
    flat.push_back({2.0, 2.0});
  }
  EXPECT_NEAR(empirical_lip(grid, trans), 1.0, 1e-12);
  EXPECT_NEAR(empirical_lip(grid, kink), 3.0, 1e-12);
  EXPECT_EQ(empirical_lip(grid, flat), 0.0);
  for (const auto* rows : {&trans, &kink, &flat})
    EXPECT_LE(empirical_lip(grid, *rows, LipMode::AllPairs), empirical_lip(grid, *rows) + 1e-9);
  EXPECT_THROW(empirical_lip(std::vector<double>{0.0}, {{1.0}}), Error);
  const auto big = uniform_grid(kUnit, 2001);
  std::vector<std::vector<double>> rows(big.size(), std::vector<double>{0.0});
  EXPECT_THROW(empirical_lip(big, rows, LipMode::AllPairs), Error);
}

TEST(Refine, CoarseGridResolvesKink) {
  const auto c = curve_from_root_polys({Poly{0.0, 1.0}, Poly{0.0, -1.0}}, kUnit);
  LiftOptions opt;
  opt.refine = false;
  const auto coarse = lift_sorted(c, 10, opt);  // 0 is not a grid point
  const auto fine = refine(c, coarse);
  EXPECT_GT(fine.grid.size(), coarse.grid.size());
  double nearest = 1.0;
  for (double t : fine.grid) nearest = std::min(nearest, std::abs(t));
  EXPECT_LT(nearest, 1e-3 * (2.0 / 9.0));
  for (std::size_t k = 0; k + 1 < fine.grid.size(); ++k) EXPECT_LT(fine.grid[k], fine.grid[k + 1]);
  EXPECT_NEAR(fine.empirical_lip, 1.0, 1e-9);
  EXPECT_TRUE(fine.warnings.empty());
  // the inserted points sit near the kink only
  for (double t : fine.grid)
    if (std::find(coarse.grid.begin(), coarse.grid.end(), t) == coarse.grid.end()) EXPECT_LT(std::abs(t), 0.12);
}

TEST(Refine, SmoothSeparatedRootsUntouched) {
  const auto c = curve_from_root_polys({Poly{-1.0, 1.0}, Poly{1.0, 0.5, 0.25}}, kUnit);
  LiftOptions opt;
  opt.refine = false;
  const auto L = lift_sorted(c, 200, opt);
  const auto R = refine(c, L);
  EXPECT_EQ(R.grid, L.grid);
}

TEST(Refine, FlatFamilyConcentratesNearZero) {
  const auto c = curve_from_root_polys({Poly{0.0, 0.0, 1.0}, Poly{0.0, 0.0, -1.0}}, kUnit);
  LiftOptions opt;
  opt.refine = false;
  const auto L = lift_sorted(c, 20, opt);
  const auto R = refine(c, L);
  double prev = std::numeric_limits<double>::infinity();
  for (double w : {0.5, 0.1, 0.01}) {
    const double lip = local_lip(R, Interval{-w, w});
    EXPECT_LT(lip, prev);
    prev = lip;
  }
  EXPECT_LT(prev, 0.05);
}

TEST(Refine, JumpIsReportedAsUnresolved) {
  // sampled curve with a genuine jump in the roots
  const auto grid = uniform_grid(kUnit, 201);
  std::vector<std::vector<double>> samples;
  for (double t : grid) {
    const double r = t < 0.0 ? -1.0 : 1.0;
    samples.push_back({r});
  }
  const auto c = CoeffCurve::sampled(grid, samples, kUnit);
  LiftOptions opt;
  opt.refine = false;
  const auto L = lift_sorted(c, 21, opt);
  RefineOptions ro;
  ro.max_depth = 8;
  const auto R = refine(c, L, ro);
  EXPECT_FALSE(R.warnings.empty());
}
