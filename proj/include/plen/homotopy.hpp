#pragma once

#include "plen/geometry.hpp"

#include <span>
#include <string>
#include <vector>

namespace plen {

using Polygon = std::vector<Point>;

/// Open region inside `outer` (counterclockwise) minus the closed `holes`
/// (clockwise). Paths live in the closure.
struct PolygonalDomain {
  Polygon outer;
  std::vector<Polygon> holes;
};

struct DomainDiagnostics {
  bool valid = true;
  std::vector<std::string> issues;
};

DomainDiagnostics validate_domain(const PolygonalDomain& d, const Tolerances& tol = {});

bool point_in_closure(const PolygonalDomain& d, const Point& p, const Tolerances& tol = {});
bool segment_in_closure(const PolygonalDomain& d, const Point& a, const Point& b, const Tolerances& tol = {});
bool path_in_closure(const PolygonalDomain& d, const PolyPath& path, const Tolerances& tol = {});

/// Segment from a point on hole `hole` straight up to the first boundary it
/// meets (the outer polygon or another hole).
struct Cut {
  std::size_t hole = 0;
  Point from;
  Point to;
};

/// Crossing of cut `cut`; sign +1 from its left side to its right side.
struct Crossing {
  int cut = 0;
  int sign = 1;
  bool operator==(const Crossing&) const = default;
};

std::string to_string(const Crossing& c);  // "+0", "-3"
Crossing crossing_from_string(const std::string& s);

struct HomotopySignature {
  std::vector<Crossing> word;  // reduced
  std::vector<Cut> cuts;
};

/// One cut per hole, pairwise disjoint, kept clear of the `avoid` points and of
/// every domain vertex.
std::vector<Cut> make_cuts(const PolygonalDomain& d, std::span<const Point> avoid = {}, const Tolerances& tol = {});

/// Crossing sequence of a path, unreduced.
std::vector<Crossing> crossings(const PolyPath& path, std::span<const Cut> cuts);
std::vector<Crossing> reduce_word(std::span<const Crossing> word);

HomotopySignature homotopy_signature(const PolygonalDomain& d, const PolyPath& path, std::span<const Cut> cuts,
                                     const Tolerances& tol = {});
/// Cuts chosen to avoid the path's endpoints.
HomotopySignature homotopy_signature(const PolygonalDomain& d, const PolyPath& path, const Tolerances& tol = {});

struct ShortenOptions {
  double tol = 1e-9;
  int max_iter = 10000;
};

struct GeodesicResult {
  PolyPath polyline;  // parameterized by Euclidean arc length
  bool taut = false;
  int iterations = 0;
  HomotopySignature signature;
};

GeodesicResult shorten(const PolygonalDomain& d, const PolyPath& path, const ShortenOptions& options = {},
                       const Tolerances& tol = {});

/// Shortest path in a domain without holes, via the visibility graph.
PolyPath visibility_geodesic(const PolygonalDomain& d, const Point& p, const Point& q, const Tolerances& tol = {});

/// Symmetric Hausdorff distance between the images.
double hausdorff(const PolyPath& a, const PolyPath& b);

/// Polyline with breakpoints at cumulative arc length; repeated vertices are merged.
PolyPath arc_length_path(const std::vector<Point>& vertices);

}  // namespace plen
