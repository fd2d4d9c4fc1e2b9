#include <hyperlift/lifting.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace hyperlift;
using hyperlift::testing::curve_from_root_polys;

namespace {

const Interval kUnit{-1.0, 1.0};

// sigma(sorted row) against c(t), relative to the curve size
double reconstruction_error(const CoeffCurve& c, const LiftResult& L) {
  double worst = 0.0;
  for (std::size_t k = 0; k < L.grid.size(); ++k) {
    auto row = L.branches[k];
    std::sort(row.begin(), row.end());
    const auto e = from_roots(std::span<const double>(row)).elem();
    const auto v = c.value(L.grid[k]);
    double scale = 1.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(e[i] - v[i]) / scale);
  }
  return worst;
}

}  // namespace

TEST(LiftSorted, TranslatedConstantRoots) {
  const auto c = curve_from_root_polys({Poly{-1.0, 1.0}, Poly{1.0, 1.0}}, kUnit);
  const auto L = lift_sorted(c, 1001);
  EXPECT_NEAR(L.empirical_lip, 1.0, 1e-9);
  for (std::size_t k = 0; k < L.grid.size(); ++k) {
    EXPECT_NEAR(L.branches[k][0], L.grid[k] - 1.0, 1e-12);
    EXPECT_NEAR(L.branches[k][1], L.grid[k] + 1.0, 1e-12);
  }
  EXPECT_TRUE(L.warnings.empty());
}

TEST(LiftSorted, KinkedPairHasSlopeThree) {
  const auto c = curve_from_root_polys({Poly{0.0, 3.0}, Poly{0.0, -1.0}}, kUnit);
  const auto L = lift_sorted(c, 1000);
  EXPECT_NEAR(L.empirical_lip, 3.0, 1e-6);
  for (std::size_t k = 0; k < L.grid.size(); ++k) EXPECT_LE(L.branches[k][0], L.branches[k][1]);
  EXPECT_LT(reconstruction_error(c, L), 1e-12);
}

TEST(LiftSorted, ConstantCurve) {
  const auto c = curve_from_root_polys({Poly{2.0}, Poly{-1.0}, Poly{2.0}}, kUnit);
  const auto L = lift_sorted(c, 257);
  EXPECT_EQ(L.empirical_lip, 0.0);
  EXPECT_EQ(L.max_jump, 0.0);
}

TEST(LiftSorted, RejectsNonHyperbolicWithLocation) {
  // z^2 + t: complex roots for t > 0
  const auto c = CoeffCurve::polynomial({Poly{0.0}, Poly{0.0, 1.0}}, kUnit);
  try {
    lift_sorted(c, 101, {std::nullopt, false, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHyperbolic);
    ASSERT_TRUE(e.location().has_value());
    EXPECT_GT(*e.location(), 0.0);
  }
}

TEST(LiftSorted, SubIntervalAndParameterChecks) {
  const auto c = curve_from_root_polys({Poly{0.0, 1.0}, Poly{0.0, -1.0}}, kUnit);
  LiftOptions opt;
  opt.interval = Interval{0.0, 0.5};
  const auto L = lift_sorted(c, 11, opt);
  EXPECT_DOUBLE_EQ(L.grid.front(), 0.0);
  EXPECT_DOUBLE_EQ(L.grid.back(), 0.5);
  EXPECT_THROW(lift_sorted(c, 1), Error);
  opt.interval = Interval{0.0, 2.0};
  EXPECT_THROW(lift_sorted(c, 11, opt), Error);
}

TEST(LiftSorted, InvariantsOnRandomFamilies) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    std::vector<Poly> rs;
    for (int i = 0; i < n; ++i) rs.push_back(Poly{u(rng), u(rng), u(rng)});
    const auto c = curve_from_root_polys(rs, kUnit);
    const auto L = lift_sorted(c, 2001);
    EXPECT_LT(reconstruction_error(c, L), 1e-8);
    double max_dt = 0.0;
    for (std::size_t k = 0; k + 1 < L.grid.size(); ++k) {
      max_dt = std::max(max_dt, L.grid[k + 1] - L.grid[k]);
      EXPECT_GT(L.grid[k + 1], L.grid[k]);
      EXPECT_TRUE(std::is_sorted(L.branches[k].begin(), L.branches[k].end()));
    }
    EXPECT_LE(L.max_jump, L.empirical_lip * max_dt * (1.0 + 1e-6));
  }
}

TEST(LiftSorted, GridDoublingIsStable) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Poly> rs;
    for (int i = 0; i < 4; ++i) rs.push_back(Poly{u(rng), u(rng), u(rng), u(rng)});
    const auto c = curve_from_root_polys(rs, kUnit);
    const double a = lift_sorted(c, 2000).empirical_lip;
    const double b = lift_sorted(c, 4000).empirical_lip;
    EXPECT_LT(std::abs(a - b), 0.01 * std::max(a, b));
  }
}

TEST(LiftSorted, IdenticalUnderParallelism) {
  std::vector<Poly> rs{Poly{0.1, 1.0, -2.0}, Poly{0.0, -1.0, 1.0}, Poly{0.3, 0.5}};
  const auto c = curve_from_root_polys(rs, kUnit);
  const auto a = lift_sorted(c, 3000);
  const auto b = lift_sorted(c, 3000);
  EXPECT_EQ(a.grid, b.grid);
  EXPECT_EQ(a.branches, b.branches);
}

TEST(ClusterReduce, NearbyPairAndOutlier) {
  const auto c = curve_from_root_polys({Poly{-1.0}, Poly{-0.99}, Poly{5.0}}, kUnit);
  const auto tree = cluster_reduce(c, 0.0);
  ASSERT_EQ(tree.clusters.size(), 2u);
  EXPECT_EQ(tree.clusters[0], (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(tree.clusters[1], (std::vector<std::size_t>{2}));
  // the pair splits again one level down
  EXPECT_EQ(tree.children[0].clusters.size(), 2u);
}

TEST(ClusterReduce, SeparatedRootsAreSingletons) {
  const auto c = curve_from_root_polys({Poly{1.0}, Poly{2.0}, Poly{3.0}}, kUnit);
  const auto tree = cluster_reduce(c, 0.0);
  ASSERT_EQ(tree.clusters.size(), 3u);
  for (const auto& ch : tree.children) {
    EXPECT_TRUE(ch.is_leaf());
    EXPECT_EQ(ch.degree(), 1u);
  }
  EXPECT_EQ(tree.depth(), 2u);
}

TEST(ClusterReduce, CollapsedClusterIsADepthOneLeaf) {
  const auto c = curve_from_root_polys({Poly{0.0}, Poly{0.0}, Poly{5.0}}, kUnit);
  const auto tree = cluster_reduce(c, 0.0);
  ASSERT_EQ(tree.children.size(), 2u);
  const auto& pair = tree.children[0];
  EXPECT_TRUE(pair.is_leaf());
  EXPECT_EQ(pair.depth(), 1u);
  EXPECT_EQ(pair.clusters.size(), 1u);
  EXPECT_NEAR(pair.scale, 0.0, 1e-12);
}

TEST(ClusterReduce, ZeroDominantInvariantCannotReduce) {
  const auto c = curve_from_root_polys({Poly{0.0, 1.0}, Poly{0.0, -1.0}}, kUnit);
  try {
    cluster_reduce(c, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CannotReduce);
  }
  EXPECT_NO_THROW(cluster_reduce(c, 0.5));
}

TEST(ClusterReduce, ReassemblyAndDegreeInvariants) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 6;
    std::vector<Poly> rs;
    for (int i = 0; i < n; ++i) {
      const double base = u(rng);
      rs.push_back(Poly{base, u(rng)});
      if (i + 1 < n && trial % 2 == 0) rs.push_back(Poly{base + 1e-3 * u(rng), u(rng)}), ++i;
    }
    const auto c = curve_from_root_polys(rs, kUnit);
    const double t0 = 0.3;
    const auto tree = cluster_reduce(c, t0);
    const auto roots = roots_at(c, t0);
    const auto back = reassemble(tree);
    ASSERT_EQ(back.size(), roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) EXPECT_NEAR(back[i], roots[i], 1e-10 * tree.scale);
    auto check = [&](auto&& self, const ClusterTree& node) -> void {
      std::size_t total = 0;
      for (const auto& cl : node.clusters) total += cl.size();
      EXPECT_EQ(total, node.degree());
      for (const auto& ch : node.children) {
        EXPECT_LE(ch.degree(), node.degree());
        EXPECT_TRUE(ch.interval.contains(t0));
        self(self, ch);
      }
    };
    check(check, tree);
    EXPECT_TRUE(tree.interval.contains(t0));
  }
}

TEST(ClusterReduce, WindowStopsBeforeClustersMerge) {
  // pair {t, -t} separated from 3: clusters merge only as t -> 0
  const auto c = curve_from_root_polys({Poly{0.0, 1.0}, Poly{0.0, -1.0}, Poly{3.0}}, kUnit);
  const auto tree = cluster_reduce(c, 0.8);
  EXPECT_TRUE(tree.interval.contains(0.8));
  EXPECT_LE(tree.interval.hi, 1.0);
}

TEST(Glue, SplitCopiesReproduceGlobalLift) {
  const auto c = curve_from_root_polys({Poly{-1.0, 1.0}, Poly{1.0, 1.0}}, kUnit);
  LiftOptions lo, ro;
  lo.interval = Interval{-1.0, 0.0};
  ro.interval = Interval{0.0, 1.0};
  const auto left = lift_sorted(c, 101, lo);
  const auto right = lift_sorted(c, 101, ro);
  GlueInfo info;
  const auto g = glue(left, right, Interval{0.0, 0.0}, {}, &info);
  const auto whole = lift_sorted(c, 201);
  ASSERT_EQ(g.grid.size(), whole.grid.size());
  for (std::size_t k = 0; k < g.grid.size(); ++k) {
    EXPECT_NEAR(g.grid[k], whole.grid[k], 1e-15);
    EXPECT_NEAR(row_distance(g.branches[k], whole.branches[k]), 0.0, 1e-14);
  }
  EXPECT_EQ(info.permutation, (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(info.lip_preserved);
}

TEST(Glue, SwappedBranchesAreRelabeled) {
  const auto c = curve_from_root_polys({Poly{0.0, 1.0}, Poly{0.0, -1.0}}, kUnit);
  LiftOptions lo, ro;
  lo.interval = Interval{-1.0, 0.1};
  ro.interval = Interval{-0.1, 1.0};
  lo.refine = ro.refine = false;
  const auto left = lift_sorted(c, 221, lo);
  auto right = lift_sorted(c, 221, ro);
  for (auto& row : right.branches) std::swap(row[0], row[1]);
  GlueOptions opt;
  opt.at = 0.05;
  GlueInfo info;
  const auto g = glue(left, right, Interval{-0.1, 0.1}, opt, &info);
  EXPECT_NEAR(info.t12, 0.05, 1e-12);
  EXPECT_EQ(info.permutation, (std::vector<std::size_t>{1, 0}));
  EXPECT_NEAR(g.empirical_lip, 1.0, 1e-9);
  EXPECT_LE(g.empirical_lip, std::max(left.empirical_lip, right.empirical_lip) + 1e-9);
  for (std::size_t k = 0; k < g.grid.size(); ++k) EXPECT_LE(g.branches[k][0], g.branches[k][1] + 1e-15);
}

TEST(Glue, DisjointMultisetsAreIncompatible) {
  const auto a = curve_from_root_polys({Poly{0.0}, Poly{1.0}}, kUnit);
  const auto b = curve_from_root_polys({Poly{5.0}, Poly{6.0}}, kUnit);
  const auto left = lift_sorted(a, 11), right = lift_sorted(b, 11);
  try {
    glue(left, right, kUnit);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IncompatibleLifts);
  }
}

TEST(LiftC1, CrossingPairFollowsSlopes) {
  const auto c = curve_from_root_polys({Poly{0.0, 1.0}, Poly{0.0, -1.0}}, kUnit);
  const auto L = lift_c1(c, 4097);
  ASSERT_EQ(L.mode, LiftMode::C1);
  // branch 0 starts as the smaller root (-1 at t = -1), i.e. t
  for (std::size_t k = 0; k < L.grid.size(); ++k) {
    EXPECT_NEAR(L.branches[k][0], L.grid[k], 1e-9);
    EXPECT_NEAR(L.branches[k][1], -L.grid[k], 1e-9);
  }
  ASSERT_TRUE(L.derivative_data.has_value());
  EXPECT_LE(L.derivative_data->max_derivative_jump, 1e-6);
  EXPECT_EQ(L.derivative_data->collisions.size(), 1u);
  EXPECT_TRUE(L.warnings.empty());
}

TEST(LiftC1, CrossingOffTheGrid) {
  const auto c = curve_from_root_polys({Poly{0.0, 1.0}, Poly{0.0, -1.0}}, kUnit);
  const auto L = lift_c1(c, 4096);
  for (std::size_t k = 0; k < L.grid.size(); ++k) EXPECT_NEAR(L.branches[k][0], L.grid[k], 1e-9);
}

TEST(LiftC1, NoCollisionMatchesSortedLift) {
  const auto c = curve_from_root_polys({Poly{-1.0, 1.0}, Poly{1.0, 1.0}}, kUnit);
  const auto a = lift_c1(c, 501);
  LiftOptions opt;
  opt.refine = false;
  const auto b = lift_sorted(c, 501, opt);
  EXPECT_EQ(a.branches, b.branches);
  EXPECT_TRUE(a.derivative_data->collisions.empty());
}

TEST(LiftC1, TangentialTouchKeepsSortedOrder) {
  const auto c = curve_from_root_polys({Poly{0.0, 0.0, 1.0}, Poly{0.0, 0.0, -1.0}}, kUnit);
  const auto L = lift_c1(c, 2001);
  for (std::size_t k = 0; k < L.grid.size(); ++k) {
    const double t = L.grid[k];
    EXPECT_NEAR(L.branches[k][0], -t * t, 1e-9);
    EXPECT_NEAR(L.branches[k][1], t * t, 1e-9);
  }
  EXPECT_LE(L.derivative_data->max_derivative_jump, 1e-6);
}

TEST(LiftC1, TripleCrossing) {
  const auto c = curve_from_root_polys({Poly{0.0, 1.0}, Poly{0.0, -2.0}, Poly{0.0, 0.5}, Poly{3.0}}, kUnit);
  const auto L = lift_c1(c, 3001);
  for (std::size_t k = 0; k < L.grid.size(); ++k) {
    const double t = L.grid[k];
    // at t = -1 the sorted order is (-1, -0.5, 2, 3)
    EXPECT_NEAR(L.branches[k][0], t, 1e-8);
    EXPECT_NEAR(L.branches[k][1], 0.5 * t, 1e-8);
    EXPECT_NEAR(L.branches[k][2], -2.0 * t, 1e-8);
    EXPECT_NEAR(L.branches[k][3], 3.0, 1e-12);
  }
}

TEST(LiftC1, MultisetsAgreeWithSortedLift) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Poly> rs;
    for (int i = 0; i < 3; ++i) rs.push_back(Poly{0.3 * u(rng), u(rng), u(rng)});
    const auto c = curve_from_root_polys(rs, kUnit);
    const auto a = lift_c1(c, 1001);
    LiftOptions opt;
    opt.refine = false;
    const auto b = lift_sorted(c, 1001, opt);
    for (std::size_t k = 0; k < a.grid.size(); ++k) {
      auto row = a.branches[k];
      std::sort(row.begin(), row.end());
      EXPECT_EQ(row, b.branches[k]);
    }
  }
}

TEST(LiftC1, TooCoarseGrid) {
  const auto c = curve_from_root_polys({Poly{0.0, 1.0}, Poly{0.0, -1.0}}, kUnit);
  try {
    lift_c1(c, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientResolution);
  }
}

TEST(ClassifyPoint, Trichotomy) {
  const auto pm_t = curve_from_root_polys({Poly{0.0, 1.0}, Poly{0.0, -1.0}}, kUnit);
  const auto pm_t2 = curve_from_root_polys({Poly{0.0, 0.0, 1.0}, Poly{0.0, 0.0, -1.0}}, kUnit);
  EXPECT_EQ(classify_point(pm_t, 0.5).kind, PointCase::Case0);
  const auto p = classify_point(pm_t, 0.0);
  EXPECT_EQ(p.kind, PointCase::Case1);
  EXPECT_NEAR(p.c1_second, 4.0, 1e-12);
  EXPECT_EQ(classify_point(pm_t2, 0.0).kind, PointCase::Case2);
  EXPECT_EQ(classify_point(pm_t2, 0.1).kind, PointCase::Case0);
}

namespace {

Field2D make_field(const std::function<std::vector<double>(double, double)>& roots_xy, std::size_t nodes) {
  Field2D f;
  f.x = uniform_grid(kUnit, nodes);
  f.y = uniform_grid(kUnit, nodes);
  f.values.assign(nodes, std::vector<std::vector<double>>(nodes));
  for (std::size_t i = 0; i < nodes; ++i)
    for (std::size_t j = 0; j < nodes; ++j) f.values[i][j] = from_roots(roots_xy(f.x[i], f.y[j])).elem();
  return f;
}

}  // namespace

TEST(Grid2D, DiagonalKink) {
  const auto f = make_field([](double x, double y) { return std::vector<double>{x + y, -x - y}; }, 41);
  const auto r = lift_grid_2d(f);
  EXPECT_NEAR(r.lip_x, 1.0, 1e-9);
  EXPECT_NEAR(r.lip_y, 1.0, 1e-9);
  EXPECT_NEAR(r.lip_2d, std::sqrt(2.0), 1e-9);
  EXPECT_TRUE(r.ok);
}

TEST(Grid2D, ConstantField) {
  const auto f = make_field([](double, double) { return std::vector<double>{1.0, 2.0, 2.0}; }, 11);
  const auto r = lift_grid_2d(f);
  EXPECT_EQ(r.lip_x, 0.0);
  EXPECT_EQ(r.lip_y, 0.0);
  EXPECT_EQ(r.lip_2d, 0.0);
  EXPECT_TRUE(r.ok);
}

TEST(Grid2D, MinMaxPair) {
  const auto f = make_field([](double x, double y) { return std::vector<double>{x, y}; }, 41);
  const auto r = lift_grid_2d(f);
  EXPECT_NEAR(r.lip_x, 1.0, 1e-9);
  EXPECT_NEAR(r.lip_y, 1.0, 1e-9);
  EXPECT_NEAR(r.lip_2d, 1.0, 1e-9);
  EXPECT_TRUE(r.ok);
}

TEST(Grid2D, ErrorsCarryNodeCoordinates) {
  auto f = make_field([](double x, double y) { return std::vector<double>{x, y}; }, 5);
  f.values[2][3] = {0.0, 1.0};  // z^2 + 1
  try {
    lift_grid_2d(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHyperbolic);
    EXPECT_NE(std::string(e.what()).find("(0, 0.5)"), std::string::npos) << e.what();
  }
  f.values.pop_back();
  EXPECT_THROW(lift_grid_2d(f), Error);
}

TEST(BoundReport, PlusMinusT) {
  const auto c = curve_from_root_polys({Poly{0.0, 1.0}, Poly{0.0, -1.0}}, Interval{-2.0, 2.0});
  const auto r = bound_report(c, {-1.0, 1.0}, {-2.0, 2.0});
  EXPECT_NEAR(r.A0, 12.0 * std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(r.empirical_lip, 1.0, 1e-9);
  EXPECT_NEAR(r.ratio, 1.0 / (2.0 * std::sqrt(2.0)), 1e-9);
}

TEST(BoundReport, ConstantCurveHasZeroRatio) {
  const auto c = curve_from_root_polys({Poly{1.0}, Poly{1.0}}, Interval{-2.0, 2.0});
  const auto r = bound_report(c, {-1.0, 1.0}, {-2.0, 2.0});
  EXPECT_EQ(r.ratio, 0.0);
}
