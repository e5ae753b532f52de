#pragma once

#include "plen/geometry.hpp"

#include <initializer_list>
#include <random>

namespace plen::test {

inline PolyPath path_of(std::initializer_list<Point> pts) {
  PointMatrix v(2, static_cast<Eigen::Index>(pts.size()));
  Eigen::Index k = 0;
  for (const Point& p : pts) v.col(k++) = p;
  return PolyPath(std::move(v));
}

inline PolyPath random_path(std::mt19937_64& rng, int max_vertices, double half_width) {
  std::uniform_int_distribution<int> count(2, max_vertices);
  std::uniform_real_distribution<double> coord(-half_width, half_width);
  const int n = count(rng);
  PointMatrix v(2, n);
  for (int k = 0; k < n; ++k) v.col(k) = Point(coord(rng), coord(rng));
  return PolyPath(std::move(v));
}

}  // namespace plen::test
