#include "helpers.hpp"

#include "plen/curves.hpp"
#include "plen/homotopy.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>

using namespace plen;
using plen::test::path_of;

namespace {

PolygonalDomain square_with_hole() {
  return {{Point(0, 0), Point(4, 0), Point(4, 4), Point(0, 4)},
          {{Point(1.5, 1.5), Point(1.5, 2.5), Point(2.5, 2.5), Point(2.5, 1.5)}}};
}

// Shortest polyline p -> v_1 -> ... -> v_k -> q over all ordered subsets of
// the outer vertices whose segments stay in the closure.
double brute_geodesic_length(const PolygonalDomain& d, const Point& p, const Point& q) {
  const std::size_t n = d.outer.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> used(n, false);
  std::function<void(const Point&, double)> extend = [&](const Point& at, double len) {
    if (len >= best) return;
    if (segment_in_closure(d, at, q)) best = std::min(best, len + (q - at).norm());
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i] || !segment_in_closure(d, at, d.outer[i])) continue;
      used[i] = true;
      extend(d.outer[i], len + (d.outer[i] - at).norm());
      used[i] = false;
    }
  };
  extend(p, 0.0);
  return best;
}

double sampled_hausdorff(const PolyPath& a, const PolyPath& b, int n) {
  auto one_sided = [n](const PolyPath& x, const PolyPath& y) {
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
      const Point pt = x(static_cast<double>(i) / n);
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k + 1 < y.size(); ++k) {
        const Point u = y.vertex(k), v = y.vertex(k + 1);
        const Point e = v - u;
        const double len2 = e.squaredNorm();
        const double s = len2 > 0.0 ? std::clamp((pt - u).dot(e) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, (pt - (u + s * e)).norm());
      }
      if (y.size() == 1) best = (pt - y.front()).norm();
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace

TEST(ValidateDomain, Examples) {
  EXPECT_TRUE(validate_domain(curves::square_domain(0, 1)).valid);
  PolygonalDomain touching = curves::square_domain(0, 4);
  touching.holes.push_back({Point(0, 1), Point(0, 2), Point(1, 2), Point(1, 1)});
  EXPECT_FALSE(validate_domain(touching).valid);
  const PolygonalDomain bowtie{{Point(0, 0), Point(2, 2), Point(2, 0), Point(0, 2)}, {}};
  EXPECT_FALSE(validate_domain(bowtie).valid);
  const PolygonalDomain clockwise{{Point(0, 0), Point(0, 1), Point(1, 1), Point(1, 0)}, {}};
  EXPECT_FALSE(validate_domain(clockwise).valid);
  EXPECT_TRUE(validate_domain(curves::square_annulus()).valid);
  for (const auto& d : {curves::hexagon_domain(), curves::l_domain(), curves::u_domain(), curves::comb_domain()})
    EXPECT_TRUE(validate_domain(d).valid);
}

TEST(SegmentInClosure, Examples) {
  EXPECT_TRUE(segment_in_closure(curves::square_domain(0, 4), Point(1, 1), Point(3, 3)));
  EXPECT_FALSE(segment_in_closure(square_with_hole(), Point(1, 1), Point(3, 3)));
  EXPECT_TRUE(segment_in_closure(square_with_hole(), Point(1.5, 1.5), Point(1.5, 2.5)));
  EXPECT_TRUE(segment_in_closure(square_with_hole(), Point(1.5, 1.0), Point(1.5, 3.0)));
  EXPECT_TRUE(segment_in_closure(curves::l_domain(), Point(1, 3), Point(3, 1)));
  EXPECT_FALSE(segment_in_closure(curves::l_domain(), Point(1, 3.5), Point(3.5, 1)));
  EXPECT_TRUE(segment_in_closure(curves::l_domain(), Point(1, 3), Point(2, 2)));
  EXPECT_FALSE(segment_in_closure(curves::square_domain(0, 4), Point(1, 1), Point(5, 1)));
}

TEST(Signature, Examples) {
  const auto d = curves::square_annulus();
  const auto cuts = make_cuts(d, std::vector<Point>{Point(1, 3), Point(5, 3)});
  ASSERT_EQ(cuts.size(), 1u);
  const auto avoid = homotopy_signature(d, path_of({{1, 3}, {1, 1}, {5, 1}, {5, 3}}), cuts);
  EXPECT_TRUE(avoid.word.empty());
  const auto over = homotopy_signature(d, path_of({{1, 3}, {1, 5}, {5, 5}, {5, 3}}), cuts);
  ASSERT_EQ(over.word.size(), 1u);
  EXPECT_EQ(over.word[0].cut, 0);
  const auto back = homotopy_signature(d, path_of({{1, 3}, {1, 5}, {5, 5}, {1, 5}, {1, 3}}), cuts);
  EXPECT_TRUE(back.word.empty());
  const auto raw = crossings(path_of({{1, 3}, {1, 5}, {5, 5}, {1, 5}, {1, 3}}), cuts);
  EXPECT_EQ(raw.size(), 2u);
}

TEST(Signature, LoopsAroundTheHole) {
  const auto d = curves::square_annulus();
  const PolyPath ccw = path_of({{1, 3}, {1, 1}, {5, 1}, {5, 5}, {1, 5}, {1, 3}});
  const PolyPath cw = reversed(ccw);
  const auto a = homotopy_signature(d, ccw);
  const auto b = homotopy_signature(d, cw, a.cuts);
  ASSERT_EQ(a.word.size(), 1u);
  ASSERT_EQ(b.word.size(), 1u);
  EXPECT_EQ(a.word[0].sign, -b.word[0].sign);
  EXPECT_THROW(homotopy_signature(d, path_of({{1, 3}, {3, 3}}), a.cuts), std::invalid_argument);
}

TEST(ReduceWord, Cancels) {
  const std::vector<Crossing> w{{0, 1}, {1, 1}, {1, -1}, {0, -1}, {2, 1}};
  const auto r = reduce_word(w);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0], (Crossing{2, 1}));
  EXPECT_EQ(to_string(Crossing{3, -1}), "-3");
  EXPECT_EQ(crossing_from_string("+12"), (Crossing{12, 1}));
  EXPECT_THROW(crossing_from_string("4"), std::invalid_argument);
}

TEST(Shorten, ConvexGivesChord) {
  const auto d = curves::square_domain(0, 4);
  const auto r = shorten(d, path_of({{0.5, 0.5}, {3.5, 1.0}, {1.0, 3.5}, {3.0, 3.0}}));
  EXPECT_TRUE(r.taut);
  ASSERT_EQ(r.polyline.size(), 2);
  EXPECT_LE(hausdorff(r.polyline, curves::segment(Point(0.5, 0.5), Point(3, 3))), 1e-12);
}

TEST(Shorten, LShapeThroughReflexCorner) {
  const auto d = curves::l_domain();
  const auto r = shorten(d, path_of({{0.5, 3.5}, {0.5, 0.5}, {3.5, 0.5}, {3.5, 1.0}}));
  EXPECT_TRUE(r.taut);
  ASSERT_EQ(r.polyline.size(), 3);
  EXPECT_LE((r.polyline.vertex(1) - Point(2, 2)).norm(), 1e-12);
  EXPECT_LE(hausdorff(r.polyline, visibility_geodesic(d, Point(0.5, 3.5), Point(3.5, 1.0))), 1e-9);
}

TEST(Shorten, AnnulusLoop) {
  const auto d = curves::square_annulus();
  const PolyPath loop = path_of({{1, 3}, {1, 5}, {5, 5}, {5, 1}, {1, 1}, {1, 3}});
  const auto r = shorten(d, loop);
  EXPECT_TRUE(r.taut);
  EXPECT_LE(hausdorff(r.polyline, path_of({{1, 3}, {2, 4}, {4, 4}, {4, 2}, {2, 2}, {1, 3}})), 1e-12);
  EXPECT_EQ(homotopy_signature(d, loop, r.signature.cuts).word, r.signature.word);
  const auto again = shorten(d, r.polyline);
  EXPECT_LE(hausdorff(again.polyline, r.polyline), 1e-9);
  EXPECT_LE(euclidean_length(r.polyline), euclidean_length(loop));
}

TEST(Shorten, RandomWalksInAnnulusAgree) {
  const auto d = curves::square_annulus();
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  const PolyPath base = path_of({{1, 3}, {1, 5}, {3, 5}, {5, 5}, {5, 3}, {5, 1}, {3, 1}, {1, 1}, {1, 3}});
  const auto ref = shorten(d, base);
  for (int c = 0; c < 10; ++c) {
    PointMatrix v = base.vertices();
    for (Eigen::Index k = 1; k + 1 < v.cols(); ++k) v.col(k) += Point(u(rng), u(rng));
    const auto r = shorten(d, PolyPath(v));
    EXPECT_LE(hausdorff(r.polyline, ref.polyline), 1e-8);
  }
}

TEST(Shorten, TwiceAroundKeepsWinding) {
  const auto d = curves::square_annulus();
  const PolyPath twice =
      path_of({{1, 3}, {1, 5}, {5, 5}, {5, 1}, {1, 1}, {1, 3}, {1, 5}, {5, 5}, {5, 1}, {1, 1}, {1, 3}});
  const auto r = shorten(d, twice);
  EXPECT_EQ(r.signature.word.size(), 2u);
  EXPECT_TRUE(r.taut);
  EXPECT_GT(euclidean_length(r.polyline), 2.0 * 8.0);
}

TEST(Shorten, ConstantAndRejected) {
  const auto d = curves::square_annulus();
  const auto r = shorten(d, path_of({{1, 1}, {1, 5}, {1, 1}}));
  EXPECT_TRUE(r.polyline.is_constant());
  EXPECT_THROW(shorten(d, path_of({{1, 1}, {3, 3}})), std::invalid_argument);
}

TEST(Shorten, IterationLimit) {
  const auto d = curves::comb_domain();
  const PolyPath in = path_of({{0.5, 2.5}, {0.5, 0.5}, {2.0, 0.2}, {3.5, 0.5}, {4.0, 2.5}, {5.0, 0.5}, {8.5, 0.5}});
  const auto r = shorten(d, in, {1e-9, 0});
  EXPECT_FALSE(r.taut);
  EXPECT_EQ(r.iterations, 0);
}

TEST(VisibilityGeodesic, Examples) {
  const auto sq = curves::square_domain(0, 4);
  const auto seg = visibility_geodesic(sq, Point(1, 1), Point(3, 2));
  EXPECT_EQ(seg.size(), 2);
  EXPECT_TRUE(visibility_geodesic(sq, Point(1, 1), Point(1, 1)).is_constant());
  EXPECT_EQ(visibility_geodesic(curves::l_domain(), Point(0.5, 3.5), Point(3.5, 0.5)).size(), 2);
  const auto l = visibility_geodesic(curves::l_domain(), Point(0.5, 3.5), Point(3.5, 1.0));
  ASSERT_EQ(l.size(), 3);
  EXPECT_EQ(l.vertex(1), Point(2, 2));
  EXPECT_THROW(visibility_geodesic(curves::square_annulus(), Point(1, 1), Point(5, 5)), std::invalid_argument);
}

TEST(VisibilityGeodesic, MatchesBruteForce) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.05, 3.95);
  for (const auto& d : {curves::l_domain(), curves::u_domain()}) {
    int done = 0;
    while (done < 25) {
      const Point p(u(rng) * (d.outer.size() == 8 ? 1.5 : 1.0), u(rng));
      const Point q(u(rng) * (d.outer.size() == 8 ? 1.5 : 1.0), u(rng));
      if (!point_in_closure(d, p) || !point_in_closure(d, q)) continue;
      ++done;
      EXPECT_NEAR(euclidean_length(visibility_geodesic(d, p, q)), brute_geodesic_length(d, p, q), 1e-12);
    }
  }
}

TEST(Hausdorff, Examples) {
  const PolyPath seg = path_of({{0, 0}, {1, 0}});
  EXPECT_EQ(hausdorff(seg, seg), 0.0);
  EXPECT_EQ(hausdorff(seg, reversed(seg)), 0.0);
  EXPECT_NEAR(hausdorff(seg, path_of({{0, 0.3}, {1, 0.3}})), 0.3, 1e-15);
}

TEST(Hausdorff, MatchesDenseSampling) {
  std::mt19937_64 rng(43);
  for (int c = 0; c < 30; ++c) {
    const PolyPath a = plen::test::random_path(rng, 6, 1.0);
    const PolyPath b = plen::test::random_path(rng, 6, 1.0);
    const double exact = hausdorff(a, b);
    const double sampled = sampled_hausdorff(a, b, 4000);
    EXPECT_GE(exact + 1e-12, sampled);
    EXPECT_LE(exact, sampled + 4.0 * std::max(euclidean_length(a), euclidean_length(b)) / 4000.0);
  }
}
