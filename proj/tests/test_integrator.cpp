#include "helpers.hpp"

#include "plen/curves.hpp"
#include "plen/integrator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace plen;
using plen::test::path_of;

namespace {

// Midpoint rule over x of L^{x,0,1} for a vertical segment of height ell.
double brute_fiber_average(double ell, int n) {
  const PolyPath seg = path_of({{0, 0}, {0, ell}});
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += fiber_length(seg, {(k + 0.5) / n, 0.0, 1.0});
  return sum / n;
}

}  // namespace

TEST(SegmentFiberAverage, MatchesBruteForce) {
  for (const double ell : {0.0, 0.1, 0.5, 0.999, 1.0, 1.3, 2.0, 2.5, 7.25, 40.0})
    EXPECT_NEAR(segment_fiber_average(ell), brute_fiber_average(ell, 20000), 2e-4) << ell;
}

TEST(SegmentFiberAverage, KnownValues) {
  EXPECT_DOUBLE_EQ(segment_fiber_average(1.0), 0.875);
  EXPECT_DOUBLE_EQ(segment_fiber_average(2.0), 1.4375);
  for (const double ell : {0.1, 0.25, 0.6}) EXPECT_NEAR(segment_fiber_average(ell), ell - ell * ell / 8.0, 1e-15);
}

TEST(SegmentOracle, PanelConvergence) {
  const double a = segment_length_oracle(1.0, 256);
  const double b = segment_length_oracle(1.0, 512);
  EXPECT_NEAR(a, b, 1e-10);
  EXPECT_NEAR(a, 0.435579213044759, 1e-10);
}

TEST(SegmentOracle, RangeAndTrend) {
  double prev = 0.0;
  for (const double d : {0.01, 0.1, 1.0, 10.0, 1e3, 1e6}) {
    const double v = segment_length_oracle(d);
    EXPECT_GT(v, prev);
    EXPECT_LT(v, 1.0);
    prev = v;
  }
  EXPECT_THROW((void)segment_length_oracle(0.0), std::invalid_argument);
}

TEST(SegmentOracle, SmallSegmentsScaleLinearly) {
  const double a = segment_length_oracle(1e-3) / 1e-3;
  const double b = segment_length_oracle(2e-3) / 2e-3;
  EXPECT_NEAR(a, b, 1e-2);
  EXPECT_GT(a, 0.5);
  EXPECT_LT(a, 2.0 / std::numbers::pi + 1e-9);
}

TEST(EstimateLength, ConstantPath) {
  const auto e = estimate_length(Curve(PolyPath::constant(Point(1, 1))), {1000, 1});
  EXPECT_EQ(e.value, 0.0);
  EXPECT_EQ(e.std_error, 0.0);
}

TEST(EstimateLength, SegmentAgreesWithOracle) {
  const auto e = estimate_length(Curve(path_of({{0, 0}, {0, 1}})), {100000, 42});
  EXPECT_LE(std::abs(e.value - segment_length_oracle(1.0)), 3.0 * e.std_error);
  EXPECT_LE(e.std_error, 0.003);
  EXPECT_EQ(e.samples, 100000);
  EXPECT_EQ(e.seed, 42u);
}

TEST(EstimateLength, JitteredGridAgreesWithOracle) {
  const auto e = estimate_length(Curve(path_of({{0, 0}, {1, 0}})), {40, 42}, Method::jittered_grid);
  EXPECT_EQ(e.samples, 40 * 40 * 40);
  EXPECT_NEAR(e.value, segment_length_oracle(1.0), 5e-3);
}

TEST(EstimateLength, Deterministic) {
  const Curve k = curves::koch(3);
  const auto a = estimate_length(k, {3000, 9});
  const auto b = estimate_length(k, {3000, 9});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  const auto c = estimate_length(k, {3000, 10});
  EXPECT_NE(a.value, c.value);
}

TEST(EstimateLength, GraphStar) {
  PointMatrix q(2, 4);
  q << 0, 0, 0, 1, 0, 1, -1, 0;
  const PLGraphMap star({"c", "u", "d", "r"}, q, {{0, 1}, {0, 2}, {0, 3}});
  const auto e = estimate_length(Curve(star), {20000, 3});
  const auto up = estimate_length(Curve(path_of({{0, -1}, {0, 1}})), {20000, 3});
  EXPECT_GE(e.value, up.value);
  EXPECT_LT(e.value, 1.0);
}

TEST(EstimateLength, CircleLoopsIncrease) {
  std::vector<Curve> loops;
  for (int m = 1; m <= 64; m *= 2) loops.emplace_back(curves::circle_loop(m));
  const SampleBudget budget{5000, 42};
  const auto e = estimate_lengths_coupled<quad>(loops, budget);
  const auto d = estimate_deficits_coupled(loops, budget);
  for (std::size_t k = 1; k < e.size(); ++k) {
    EXPECT_GT(e[k].value, e[k - 1].value);
    EXPECT_LT(d[k].value, d[k - 1].value);
    if (k >= 2) EXPECT_LT(d[k].value, 0.05 * d[k - 1].value);
  }
  for (std::size_t k = 0; k < e.size(); ++k) {
    EXPECT_GT(d[k].value, 0.0);
    EXPECT_LT(static_cast<double>(e[k].value) - 3.0 * e[k].std_error, 1.0);
  }
}

TEST(EstimateLength, BadBudget) {
  EXPECT_THROW((void)estimate_length(Curve(path_of({{0, 0}, {1, 0}})), {0, 1}), std::invalid_argument);
  EXPECT_THROW((void)estimate_length(Curve(path_of({{0, 0}, {1, 0}})), {2000, 1}, Method::jittered_grid),
               std::invalid_argument);
}

TEST(DrawSamples, RangesAndReproducibility) {
  for (const Method m : {Method::monte_carlo, Method::jittered_grid}) {
    const auto s = draw_samples({m == Method::monte_carlo ? 5000 : 12, 77}, m);
    for (const auto& p : s) {
      EXPECT_TRUE(p.valid());
      EXPECT_GE(p.x, 0.0);
      EXPECT_LT(p.x, 1.0);
      EXPECT_GE(p.t, 0.0);
      EXPECT_LT(p.t, 1.0);
    }
    const auto again = draw_samples({m == Method::monte_carlo ? 5000 : 12, 77}, m);
    ASSERT_EQ(s.size(), again.size());
    for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(s[k].mu, again[k].mu);
  }
}

TEST(Coupled, RestrictionAndSplit) {
  std::mt19937_64 rng(21);
  for (int c = 0; c < 20; ++c) {
    const PolyPath g = plen::test::random_path(rng, 20, 2.0);
    const std::vector<Curve> a{g, restrict(g, 0.2, 0.8)};
    const auto ea = estimate_lengths_coupled(std::span<const Curve>(a), {2000, 5});
    EXPECT_LE(ea[1].value, ea[0].value);
    const std::vector<Curve> b{g, restrict(g, 0.0, 0.5), restrict(g, 0.5, 1.0)};
    const auto eb = estimate_lengths_coupled(std::span<const Curve>(b), {2000, 5});
    EXPECT_LE(eb[0].value, eb[1].value + eb[2].value);
  }
}

TEST(Coupled, IsometryInvarianceInTheMean) {
  std::mt19937_64 rng(22);
  RigidMotion m;
  m.turn = 0.3;
  m.translation = Point(0.77, -1.31);
  for (int c = 0; c < 5; ++c) {
    const PolyPath g = plen::test::random_path(rng, 20, 1.0);
    const std::vector<Curve> in{g, apply_isometry(g, m)};
    const auto e = estimate_lengths_coupled(std::span<const Curve>(in), {20000, 8});
    EXPECT_LE(std::abs(e[0].value - e[1].value), 3.0 * (e[0].std_error + e[1].std_error));
  }
}

TEST(Coupled, ChordLowerBound) {
  std::mt19937_64 rng(23);
  for (int c = 0; c < 10; ++c) {
    const PolyPath g = plen::test::random_path(rng, 10, 1.0);
    const auto d = estimate_difference(g, curves::segment(g.front(), g.back()), {20000, 4});
    EXPECT_GE(d.mean, -3.0 * d.std_error);
  }
}

TEST(CumulativeProfile, Examples) {
  const PolyPath seg = path_of({{0, 0}, {0, 1}});
  const double zero[] = {0.0};
  EXPECT_EQ(cumulative_profile(seg, zero, {1000, 2}), std::vector<double>{0.0});

  const PolyPath k = curves::koch(2);
  const double ends[] = {0.0, 1.0};
  const auto p = cumulative_profile(k, ends, {3000, 6});
  EXPECT_EQ(p[0], 0.0);
  EXPECT_EQ(p[1], estimate_length(Curve(k), {3000, 6}).value);

  const double mid[] = {0.0, 0.5, 1.0};
  const auto q = cumulative_profile(seg, mid, {3000, 6});
  EXPECT_GT(q[1], 0.0);
  EXPECT_LT(q[1], q[2]);
}

TEST(CumulativeProfile, MatchesRestrictedEstimates) {
  const PolyPath k = curves::koch(2);
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  const auto prof = cumulative_profile(k, grid, {2000, 3});
  for (std::size_t i = 1; i < grid.size(); ++i) {
    EXPECT_GE(prof[i], prof[i - 1]);
    const auto e = estimate_length(Curve(restrict(k, 0.0, grid[i])), {2000, 3});
    EXPECT_NEAR(prof[i], e.value, 1e-12);
  }
}

TEST(Deficit, MatchesBoundMinusValue) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int c = 0; c < 200; ++c) {
    const PolyPath g = plen::test::random_path(rng, 20, 2.0);
    const StripParams p{u(rng), u(rng), 1.0 - u(rng)};
    const double direct = static_cast<double>(quad(2.0 * p.mu) - fiber_length<quad>(g, p));
    EXPECT_NEAR(fiber_deficit(g, p), direct, 1e-12 * p.mu);
    EXPECT_GE(fiber_deficit(g, p), 0.0);
  }
}

TEST(Deficit, FullCrossingsOverSeveralSegments) {
  PointMatrix v(2, 141);
  for (int k = 0; k <= 140; ++k) v.col(k) = Point(0.0, 0.5 * k);
  EXPECT_DOUBLE_EQ(fiber_deficit(PolyPath(v), {0.0, 0.0, 1.0}), std::ldexp(1.0, -69));
}

TEST(Deficit, ComplementsEstimate) {
  const std::vector<Curve> in{curves::koch(3), PolyPath::constant(Point(0, 0))};
  const SampleBudget budget{4000, 12};
  const auto e = estimate_lengths_coupled(std::span<const Curve>(in), budget);
  const auto d = estimate_deficits_coupled(std::span<const Curve>(in), budget);
  double bound = 0.0;
  for (const auto& p : draw_samples(budget, Method::monte_carlo)) bound += 2.0 * p.mu;
  bound /= 4000.0;
  EXPECT_NEAR(e[0].value + d[0].value, bound, 1e-12);
  EXPECT_NEAR(d[1].value, bound, 1e-12);
}

TEST(Method, Names) {
  EXPECT_EQ(method_from_string("monte_carlo"), Method::monte_carlo);
  EXPECT_EQ(method_from_string("jittered_grid"), Method::jittered_grid);
  EXPECT_EQ(to_string(Method::jittered_grid), "jittered_grid");
  EXPECT_THROW((void)method_from_string("simpson"), std::invalid_argument);
}
