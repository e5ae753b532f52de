#include "plen/curves.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace plen::curves {

PolyPath segment(const Point& a, const Point& b) {
  PointMatrix v(2, 2);
  v.col(0) = a;
  v.col(1) = b;
  return PolyPath(std::move(v));
}

PolyPath koch(int level) {
  if (level < 0) throw std::invalid_argument("koch: negative level");
  std::vector<Point> pts{Point(0.0, 0.0), Point(1.0, 0.0)};
  const double c = std::cos(std::numbers::pi / 3.0);
  const double s = std::sin(std::numbers::pi / 3.0);
  for (int k = 0; k < level; ++k) {
    std::vector<Point> next{pts.front()};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const Point a = pts[i];
      const Point d = (pts[i + 1] - a) / 3.0;
      const Point p1 = a + d;
      const Point apex = p1 + Point(c * d.x() - s * d.y(), s * d.x() + c * d.y());
      next.push_back(p1);
      next.push_back(apex);
      next.push_back(a + 2.0 * d);
      next.push_back(pts[i + 1]);
    }
    pts = std::move(next);
  }
  PointMatrix v(2, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) v.col(static_cast<Eigen::Index>(i)) = pts[i];
  return PolyPath(std::move(v));
}

PolyPath circle_loop(int m, int per_turn) {
  if (m < 1 || per_turn < 3) throw std::invalid_argument("circle_loop: bad arguments");
  const Eigen::Index n = static_cast<Eigen::Index>(m) * per_turn;
  PointMatrix v(2, n + 1);
  for (Eigen::Index k = 0; k <= n; ++k) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(k % per_turn) / per_turn;
    v.col(k) = Point(std::cos(a), std::sin(a));
  }
  return PolyPath(std::move(v));
}

PolyPath power_path(int m, int n) {
  if (m < 1 || n < 2) throw std::invalid_argument("power_path: bad arguments");
  PointMatrix v(2, n);
  for (int k = 0; k < n; ++k) {
    const double s = static_cast<double>(k) / (n - 1);
    v.col(k) = Point(s, std::pow(s, m));
  }
  return PolyPath(std::move(v));
}

PolyPath perturbed(const PolyPath& path, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PointMatrix v = path.vertices();
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v.col(k) += amplitude * Point(std::cos(a), std::sin(a));
  }
  return PolyPath(path.params(), std::move(v));
}

PolygonalDomain square_domain(double lo, double hi) {
  return {{Point(lo, lo), Point(hi, lo), Point(hi, hi), Point(lo, hi)}, {}};
}

PolygonalDomain hexagon_domain() {
  PolygonalDomain d;
  for (int k = 0; k < 6; ++k) {
    const double a = std::numbers::pi * k / 3.0;
    d.outer.emplace_back(3.0 + 3.0 * std::cos(a), 3.0 + 3.0 * std::sin(a));
  }
  return d;
}

PolygonalDomain l_domain() {
  return {{Point(0, 0), Point(4, 0), Point(4, 2), Point(2, 2), Point(2, 4), Point(0, 4)}, {}};
}

PolygonalDomain u_domain() {
  return {{Point(0, 0), Point(6, 0), Point(6, 4), Point(4, 4), Point(4, 1), Point(2, 1), Point(2, 4), Point(0, 4)},
          {}};
}

PolygonalDomain comb_domain() {
  return {{Point(0, 0), Point(9, 0), Point(9, 3), Point(8, 3), Point(8, 1), Point(6, 1), Point(6, 3), Point(3, 3),
           Point(3, 1), Point(1, 1), Point(1, 3), Point(0, 3)},
          {}};
}

PolygonalDomain square_annulus() {
  return {{Point(0, 0), Point(6, 0), Point(6, 6), Point(0, 6)},
          {{Point(2, 2), Point(2, 4), Point(4, 4), Point(4, 2)}}};
}

}  // namespace plen::curves
