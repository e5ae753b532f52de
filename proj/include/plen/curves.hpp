#pragma once

#include "plen/geometry.hpp"
#include "plen/homotopy.hpp"

#include <cstdint>

namespace plen::curves {

PolyPath segment(const Point& a, const Point& b);

/// Koch iterate on the base (0,0) -> (1,0); 4^level segments.
PolyPath koch(int level);

/// s -> e^{2 pi i m s}, sampled with `per_turn` vertices per turn. Vertex
/// angles are reduced mod one turn so every turn repeats the same points.
PolyPath circle_loop(int m, int per_turn = 256);

/// s -> (s, s^m) with n uniformly spaced breakpoints.
PolyPath power_path(int m, int n = 512);

/// Every vertex moved by exactly `amplitude` in a direction drawn from `seed`;
/// the sup-norm distance to the input is `amplitude`. Directions depend only
/// on the seed, so scaling `amplitude` moves along one fixed direction field.
PolyPath perturbed(const PolyPath& path, double amplitude, std::uint64_t seed);

PolygonalDomain square_domain(double lo, double hi);
PolygonalDomain hexagon_domain();
PolygonalDomain l_domain();
PolygonalDomain u_domain();
PolygonalDomain comb_domain();
/// Outer (0,0)-(6,6) with the square hole (2,2)-(4,4).
PolygonalDomain square_annulus();

}  // namespace plen::curves
