#include "helpers.hpp"

#include "plen/curves.hpp"
#include "plen/reparam.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace plen;
using plen::test::path_of;

namespace {

// Best packing with endpoints on a uniform grid; a lower bound on the exact
// count that becomes tight as the grid refines.
std::int64_t grid_packing(const PolyPath& path, double eps, int n) {
  std::vector<std::int64_t> best(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    best[i] = best[i - 1];
    for (int k = i - 1; k >= 0; --k) {
      if (diameter(restrict(path, static_cast<double>(k) / n, static_cast<double>(i) / n)) >= eps) {
        best[i] = std::max(best[i], best[k] + 1);
        break;
      }
    }
  }
  return best[n];
}

// Largest |g'| over the segments.
double max_speed(const PolyPath& path) {
  double v = 0.0;
  for (Eigen::Index i = 0; i + 1 < path.size(); ++i)
    v = std::max(v, (path.vertex(i + 1) - path.vertex(i)).norm() / (path.param(i + 1) - path.param(i)));
  return v;
}

// max |g(a) - g(b)| over |a - b| <= delta on a fine grid; a lower bound.
double sampled_modulus(const PolyPath& path, double delta, int n) {
  double worst = 0.0;
  const int w = static_cast<int>(std::floor(delta * n));
  for (int i = 0; i <= n; ++i)
    for (int k = i; k <= std::min(n, i + w); ++k)
      worst = std::max(worst, (path(static_cast<double>(i) / n) - path(static_cast<double>(k) / n)).norm());
  return worst;
}

double max_profile_deviation(const PolyPath& path, const SampleBudget& budget) {
  std::vector<double> grid;
  for (int i = 0; i <= 64; ++i) grid.push_back(i / 64.0);
  const auto prof = cumulative_profile(path, grid, budget);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::abs(prof[i] - grid[i] * prof.back()));
  return worst / prof.back();
}

}  // namespace

TEST(DisjointIntervalCount, Examples) {
  EXPECT_EQ(disjoint_interval_count(PolyPath::constant(Point(1, 2)), 0.1), 0);
  EXPECT_EQ(disjoint_interval_count(path_of({{0, 0}, {1, 0}}), 0.3), 3);
  PointMatrix v(2, 513);
  for (int k = 0; k <= 512; ++k) {
    const double a = 2.0 * std::numbers::pi * (k % 256) / 256.0;
    v.col(k) = Point(std::cos(a), std::sin(a));
  }
  EXPECT_EQ(disjoint_interval_count(PolyPath(v), 2.0), 4);
  EXPECT_EQ(disjoint_interval_count(curves::circle_loop(2), 2.0), 4);
  EXPECT_THROW((void)disjoint_interval_count(path_of({{0, 0}, {1, 0}}), 0.0), std::invalid_argument);
}

TEST(DisjointIntervalCount, ExactSegmentCounts) {
  const PolyPath seg = path_of({{0, 0}, {1, 0}});
  for (int k = 1; k <= 20; ++k) EXPECT_EQ(disjoint_interval_count(seg, 1.0 / k), k) << k;
  EXPECT_EQ(disjoint_interval_count(seg, 0.26), 3);
  EXPECT_EQ(disjoint_interval_count(seg, 1.01), 0);
}

TEST(DisjointIntervalCount, AtLeastGridPacking) {
  std::mt19937_64 rng(31);
  for (int c = 0; c < 30; ++c) {
    const PolyPath p = plen::test::random_path(rng, 8, 1.0);
    for (const double eps : {0.2, 0.5}) {
      const auto exact = disjoint_interval_count(p, eps);
      const auto coarse = grid_packing(p, eps, 200);
      const auto fine = grid_packing(p, eps, 800);
      EXPECT_GE(exact, fine);
      EXPECT_GE(fine, coarse);
      // Rounding each optimal interval inward to the grid costs at most 2 v h of diameter.
      const auto relaxed = grid_packing(p, eps - 2.0 * max_speed(p) / 800.0, 800);
      EXPECT_LE(exact, relaxed) << "case " << c;
    }
  }
}

TEST(ModulusOfContinuity, Examples) {
  EXPECT_EQ(modulus_of_continuity(PolyPath::constant(Point(0, 0)), 0.1), 0.0);
  EXPECT_NEAR(modulus_of_continuity(path_of({{0, 0}, {1, 0}}), 0.1), 0.1, 1e-15);
  const PolyPath p20 = curves::power_path(20);
  const double m20 = modulus_of_continuity(p20, 0.1);
  EXPECT_NEAR(m20, (p20(1.0) - p20(0.9)).norm(), 1e-12);
  EXPECT_NEAR(m20, 0.878, 0.01);
  EXPECT_NEAR(modulus_of_continuity(path_of({{0, 0}, {1, 0}}), 1e-80), 1e-80, 1e-94);
}

TEST(ModulusOfContinuity, DominatesSampledModulus) {
  std::mt19937_64 rng(32);
  for (int c = 0; c < 20; ++c) {
    const PolyPath p = plen::test::random_path(rng, 10, 1.0);
    for (const double delta : {0.05, 0.2, 0.5}) {
      const double exact = modulus_of_continuity(p, delta);
      const double sampled = sampled_modulus(p, delta, 400);
      EXPECT_GE(exact + 1e-12, sampled);
      EXPECT_LE(exact, sampled + 2.0 * euclidean_length(p) / 400.0 * 10.0);
    }
  }
}

TEST(StandardRepresentation, ConstantPath) {
  const auto r = standard_representation(PolyPath::constant(Point(2, 1)), 17, {500, 1});
  EXPECT_TRUE(r.degenerate_domain);
  EXPECT_TRUE(r.path.is_constant());
  EXPECT_EQ(r.total_length, 0.0);
}

TEST(StandardRepresentation, SegmentStaysUniform) {
  const SampleBudget budget{20000, 42};
  const auto r = standard_representation(path_of({{0, 0}, {1, 0}}), 65, budget);
  EXPECT_FALSE(r.degenerate_domain);
  EXPECT_EQ(r.path.size(), 65);
  EXPECT_LT(max_profile_deviation(r.path, budget), 0.02);
  EXPECT_NEAR(euclidean_length(r.path), 1.0, 1e-12);
}

TEST(StandardRepresentation, PowerPathBecomesUniformSpeed) {
  const SampleBudget budget{5000, 42};
  const auto r = standard_representation(curves::power_path(20), 257, budget);
  EXPECT_LT(max_profile_deviation(r.path, budget), 0.05);
  EXPECT_LT(max_profile_deviation(curves::power_path(20), budget), 1.0);
  EXPECT_TRUE(r.path.front().isApprox(Point(0, 0)));
  EXPECT_TRUE(r.path.back().isApprox(Point(1, 1)));
  for (Eigen::Index i = 0; i < r.path.size(); ++i) EXPECT_DOUBLE_EQ(r.path.param(i), i / 256.0);
}

TEST(StandardRepresentation, ImageUnchanged) {
  const PolyPath k = curves::koch(2);
  const auto r = standard_representation(k, 129, {3000, 4});
  for (Eigen::Index i = 0; i < r.path.size(); ++i) {
    double best = 1e300;
    for (int s = 0; s <= 4000; ++s) best = std::min(best, (k(s / 4000.0) - r.path.vertex(i)).norm());
    EXPECT_LT(best, 1e-3);
  }
}

TEST(EquicontinuityDelta, ConstantFamily) {
  const std::vector<PolyPath> fam{PolyPath::constant(Point(0, 0))};
  const auto r = equicontinuity_delta(fam, 0.5);
  EXPECT_EQ(r.N, 0);
  EXPECT_DOUBLE_EQ(r.delta, 0.25 / 256.0);
  EXPECT_EQ(r.family_size, 1u);
}

TEST(EquicontinuityDelta, PowerFamily) {
  std::vector<PolyPath> fam;
  for (int m = 1; m <= 50; ++m) fam.push_back(curves::power_path(m));
  const auto r = equicontinuity_delta(fam, 0.2);
  std::int64_t n = 0;
  for (const auto& p : fam) n = std::max(n, disjoint_interval_count(p, 0.0125));
  EXPECT_EQ(r.N, n);
  EXPECT_EQ(r.delta, std::ldexp(0.2 * 0.2, -static_cast<int>(n + 8)));
  for (int m : {1, 7, 50}) {
    const auto g = standard_representation(fam[static_cast<std::size_t>(m - 1)], 257, {400, 42});
    EXPECT_LT(modulus_of_continuity(g.path, r.delta), 0.2);
  }
}

TEST(EquicontinuityDelta, CircleFamilyShrinks) {
  std::vector<PolyPath> fam;
  double prev_delta = 1.0;
  std::int64_t prev_n = 0;
  for (int m = 1; m <= 16; ++m) {
    fam.push_back(curves::circle_loop(m, 64));
    const auto r = equicontinuity_delta(fam, 0.5);
    EXPECT_GE(r.N, prev_n);
    EXPECT_LE(r.delta, prev_delta);
    prev_n = r.N;
    prev_delta = r.delta;
  }
  EXPECT_GT(prev_n, equicontinuity_delta(std::span(fam).first(1), 0.5).N);
}

TEST(LengthIntervalCount, SandwichedByDiameterCounts) {
  const SampleBudget budget{3000, 42};
  for (const auto& p : {path_of({{0, 0}, {1, 0}}), curves::koch(2), curves::power_path(5, 64)}) {
    for (const double eps : {0.05, 0.1}) {
      const auto n_len = length_interval_count(p, eps, budget);
      EXPECT_LE(disjoint_interval_count(p, 2.0 * std::numbers::pi * eps), n_len);
      EXPECT_LE(n_len, disjoint_interval_count(p, eps / 2.0));
    }
  }
}
