#include "plen/homotopy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace plen {

namespace {

template <typename Fn>
void for_each_edge(const Polygon& poly, Fn&& fn) {
  for (std::size_t i = 0; i < poly.size(); ++i) fn(poly[i], poly[(i + 1) % poly.size()], i);
}

std::vector<const Polygon*> boundaries(const PolygonalDomain& d) {
  std::vector<const Polygon*> out{&d.outer};
  for (const auto& h : d.holes) out.push_back(&h);
  return out;
}

double signed_area(const Polygon& poly) {
  double area = 0.0;
  for_each_edge(poly, [&](const Point& a, const Point& b, std::size_t) { area += cross(a, b); });
  return 0.5 * area;
}

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point e = b - a;
  const double ee = e.squaredNorm();
  if (ee == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(e) / ee, 0.0, 1.0);
  return (p - (a + t * e)).norm();
}

// Proper crossing: each segment's endpoints lie strictly on opposite sides of
// the other's line, by more than eps in distance.
bool properly_cross(const Point& a, const Point& b, const Point& c, const Point& d, double eps) {
  const double lab = (b - a).norm();
  const double lcd = (d - c).norm();
  if (lab == 0.0 || lcd == 0.0) return false;
  const double o1 = orient(a, b, c) / lab;
  const double o2 = orient(a, b, d) / lab;
  const double o3 = orient(c, d, a) / lcd;
  const double o4 = orient(c, d, b) / lcd;
  return ((o1 > eps && o2 < -eps) || (o1 < -eps && o2 > eps)) && ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps));
}

double segment_distance(const Point& a, const Point& b, const Point& c, const Point& d) {
  if (properly_cross(a, b, c, d, 0.0)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d), point_segment_distance(c, a, b),
                   point_segment_distance(d, a, b)});
}

// Strict interior by crossing number; boundary points may go either way.
bool inside_polygon(const Polygon& poly, const Point& p) {
  bool in = false;
  for_each_edge(poly, [&](const Point& a, const Point& b, std::size_t) {
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (x > p.x()) in = !in;
    }
  });
  return in;
}

double boundary_distance(const Polygon& poly, const Point& p) {
  double best = std::numeric_limits<double>::infinity();
  for_each_edge(poly, [&](const Point& a, const Point& b, std::size_t) {
    best = std::min(best, point_segment_distance(p, a, b));
  });
  return best;
}

void check_simple(const Polygon& poly, const std::string& name, const Tolerances& tol, DomainDiagnostics& out) {
  const std::size_t n = poly.size();
  auto issue = [&](const std::string& what) {
    out.valid = false;
    out.issues.push_back(name + ": " + what);
  };
  if (n < 3) {
    issue("fewer than 3 vertices");
    return;
  }
  for (const Point& p : poly)
    if (!p.allFinite()) {
      issue("non-finite vertex");
      return;
    }
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    const Point& c = poly[(i + 2) % n];
    if ((b - a).norm() <= tol.geo_eps) issue("repeated vertex " + std::to_string((i + 1) % n));
    if (std::abs(orient(a, b, c)) <= tol.geo_eps * (b - a).norm() && (b - a).dot(c - b) < 0.0)
      issue("edge " + std::to_string(i) + " folds back on the next edge");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segment_distance(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]) <= tol.geo_eps)
        issue("edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
    }
}

bool polygons_touch(const Polygon& p, const Polygon& q, double eps) {
  bool touch = false;
  for_each_edge(p, [&](const Point& a, const Point& b, std::size_t) {
    for_each_edge(q, [&](const Point& c, const Point& d, std::size_t) {
      if (!touch && segment_distance(a, b, c, d) <= eps) touch = true;
    });
  });
  return touch;
}

}  // namespace

DomainDiagnostics validate_domain(const PolygonalDomain& d, const Tolerances& tol) {
  DomainDiagnostics out;
  check_simple(d.outer, "outer", tol, out);
  for (std::size_t h = 0; h < d.holes.size(); ++h) check_simple(d.holes[h], "hole " + std::to_string(h), tol, out);
  if (!out.valid) return out;
  auto issue = [&](const std::string& what) {
    out.valid = false;
    out.issues.push_back(what);
  };
  if (!(signed_area(d.outer) > 0.0)) issue("outer: not counterclockwise");
  for (std::size_t h = 0; h < d.holes.size(); ++h) {
    const std::string name = "hole " + std::to_string(h);
    if (!(signed_area(d.holes[h]) < 0.0)) issue(name + ": not clockwise");
    if (polygons_touch(d.holes[h], d.outer, tol.geo_eps) || !inside_polygon(d.outer, d.holes[h].front()))
      issue(name + ": not strictly inside outer");
    for (std::size_t g = h + 1; g < d.holes.size(); ++g) {
      if (polygons_touch(d.holes[h], d.holes[g], tol.geo_eps) || inside_polygon(d.holes[g], d.holes[h].front()) ||
          inside_polygon(d.holes[h], d.holes[g].front()))
        issue(name + " and hole " + std::to_string(g) + ": not disjoint");
    }
  }
  return out;
}

bool point_in_closure(const PolygonalDomain& d, const Point& p, const Tolerances& tol) {
  for (const Polygon* poly : boundaries(d))
    if (boundary_distance(*poly, p) <= tol.geo_eps) return true;
  if (!inside_polygon(d.outer, p)) return false;
  for (const auto& h : d.holes)
    if (inside_polygon(h, p)) return false;
  return true;
}

bool segment_in_closure(const PolygonalDomain& d, const Point& a, const Point& b, const Tolerances& tol) {
  if (!point_in_closure(d, a, tol) || !point_in_closure(d, b, tol)) return false;
  const Point u = b - a;
  const double uu = u.squaredNorm();
  if (uu <= tol.geo_eps * tol.geo_eps) return true;
  // Split ab wherever it meets the boundary; each open piece is then entirely
  // inside or outside the closure and its midpoint decides.
  std::vector<double> cuts{0.0, 1.0};
  auto add = [&](double t) {
    if (t > 0.0 && t < 1.0) cuts.push_back(t);
  };
  bool crossing = false;
  for (const Polygon* poly : boundaries(d)) {
    for_each_edge(*poly, [&](const Point& c, const Point& e, std::size_t) {
      if (crossing) return;
      if (properly_cross(a, b, c, e, tol.geo_eps)) {
        crossing = true;
        return;
      }
      const Point w = e - c;
      const double denom = cross(u, w);
      if (denom != 0.0) {
        const double t = cross(c - a, w) / denom;
        if (point_segment_distance(a + t * u, c, e) <= tol.geo_eps) add(t);
      }
      for (const Point& v : {c, e})
        if (point_segment_distance(v, a, b) <= tol.geo_eps) add((v - a).dot(u) / uu);
    });
    if (crossing) return false;
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] - cuts[k] <= 0.0) continue;
    if (!point_in_closure(d, a + 0.5 * (cuts[k] + cuts[k + 1]) * u, tol)) return false;
  }
  return true;
}

bool path_in_closure(const PolygonalDomain& d, const PolyPath& path, const Tolerances& tol) {
  if (path.size() == 1) return point_in_closure(d, path.front(), tol);
  for (Eigen::Index i = 0; i + 1 < path.size(); ++i)
    if (!segment_in_closure(d, path.vertex(i), path.vertex(i + 1), tol)) return false;
  return true;
}

std::string to_string(const Crossing& c) { return (c.sign > 0 ? "+" : "-") + std::to_string(c.cut); }

Crossing crossing_from_string(const std::string& s) {
  if (s.size() < 2 || (s[0] != '+' && s[0] != '-')) throw std::invalid_argument("bad crossing: " + s);
  std::size_t used = 0;
  const int cut = std::stoi(s.substr(1), &used);
  if (used != s.size() - 1 || cut < 0) throw std::invalid_argument("bad crossing: " + s);
  return {cut, s[0] == '+' ? 1 : -1};
}

std::vector<Cut> make_cuts(const PolygonalDomain& d, std::span<const Point> avoid, const Tolerances& tol) {
  double lo_x = d.outer.front().x();
  double hi_x = lo_x;
  std::vector<double> blocked;
  for (const Polygon* poly : boundaries(d))
    for (const Point& v : *poly) {
      blocked.push_back(v.x());
      lo_x = std::min(lo_x, v.x());
      hi_x = std::max(hi_x, v.x());
    }
  for (const Point& p : avoid) blocked.push_back(p.x());
  const double margin = std::max(tol.geo_eps, 1e-7 * (hi_x - lo_x));
  auto clear = [&](double x) {
    return std::all_of(blocked.begin(), blocked.end(), [&](double b) { return std::abs(x - b) > margin; });
  };
  // Intersections of the vertical line x = c with a polygon's non-vertical edges.
  auto hits = [](const Polygon& poly, double c, std::vector<double>& ys) {
    for_each_edge(poly, [&](const Point& a, const Point& b, std::size_t) {
      if ((a.x() < c) != (b.x() < c)) ys.push_back(a.y() + (c - a.x()) / (b.x() - a.x()) * (b.y() - a.y()));
    });
  };

  std::vector<Cut> cuts;
  for (std::size_t h = 0; h < d.holes.size(); ++h) {
    const Polygon& hole = d.holes[h];
    const auto top = std::max_element(hole.begin(), hole.end(), [](const Point& a, const Point& b) {
      return a.y() < b.y() || (a.y() == b.y() && a.x() > b.x());
    });
    double h_lo = hole.front().x();
    double h_hi = h_lo;
    for (const Point& v : hole) {
      h_lo = std::min(h_lo, v.x());
      h_hi = std::max(h_hi, v.x());
    }
    double c = top->x();
    bool found = false;
    for (int j = 1; j <= 4096 && !found; ++j) {
      for (const double sign : {1.0, -1.0}) {
        const double x = top->x() + sign * (h_hi - h_lo) * j / 4099.0;
        if (x > h_lo && x < h_hi && clear(x)) {
          c = x;
          found = true;
          break;
        }
      }
    }
    if (!found) throw std::runtime_error("make_cuts: no admissible cut position");
    blocked.push_back(c);
    std::vector<double> ys;
    hits(hole, c, ys);
    const double y0 = *std::max_element(ys.begin(), ys.end());
    double y1 = std::numeric_limits<double>::infinity();
    for (const Polygon* poly : boundaries(d)) {
      if (poly == &hole) continue;
      ys.clear();
      hits(*poly, c, ys);
      for (double y : ys)
        if (y > y0) y1 = std::min(y1, y);
    }
    if (!std::isfinite(y1)) throw std::runtime_error("make_cuts: cut does not reach a boundary");
    cuts.push_back({h, Point(c, y0), Point(c, y1)});
  }
  return cuts;
}

namespace {

// Crossings of segment PQ ordered along the segment. A point on a cut's line
// counts as being on its left.
void segment_crossings(const Point& p, const Point& q, std::span<const Cut> cuts, std::vector<Crossing>& out) {
  std::vector<std::pair<double, Crossing>> found;
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    const Point& a = cuts[k].from;
    const Point& b = cuts[k].to;
    const double op = orient(a, b, p);
    const double oq = orient(a, b, q);
    const bool left_p = op >= 0.0;
    const bool left_q = oq >= 0.0;
    if (left_p == left_q) continue;
    const double lambda = op / (op - oq);
    const Point x = p + lambda * (q - p);
    const Point ab = b - a;
    const double u = (x - a).dot(ab) / ab.squaredNorm();
    if (u < 0.0 || u > 1.0) continue;
    found.push_back({lambda, Crossing{static_cast<int>(k), left_p ? 1 : -1}});
  }
  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (const auto& f : found) out.push_back(f.second);
}

std::vector<Crossing> chain_crossings(std::span<const Point> pts, std::span<const Cut> cuts) {
  std::vector<Crossing> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) segment_crossings(pts[i], pts[i + 1], cuts, out);
  return out;
}

std::vector<Point> path_points(const PolyPath& path) {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(path.size()));
  for (Eigen::Index i = 0; i < path.size(); ++i) pts.push_back(path.vertex(i));
  return pts;
}

}  // namespace

std::vector<Crossing> crossings(const PolyPath& path, std::span<const Cut> cuts) {
  const auto pts = path_points(path);
  return chain_crossings(pts, cuts);
}

std::vector<Crossing> reduce_word(std::span<const Crossing> word) {
  std::vector<Crossing> stack;
  for (const Crossing& c : word) {
    if (!stack.empty() && stack.back().cut == c.cut && stack.back().sign == -c.sign) {
      stack.pop_back();
    } else {
      stack.push_back(c);
    }
  }
  return stack;
}

HomotopySignature homotopy_signature(const PolygonalDomain& d, const PolyPath& path, std::span<const Cut> cuts,
                                     const Tolerances& tol) {
  if (!path_in_closure(d, path, tol)) throw std::invalid_argument("path leaves the closure of the domain");
  HomotopySignature sig;
  sig.cuts.assign(cuts.begin(), cuts.end());
  sig.word = reduce_word(crossings(path, cuts));
  return sig;
}

HomotopySignature homotopy_signature(const PolygonalDomain& d, const PolyPath& path, const Tolerances& tol) {
  const Point ends[2] = {path.front(), path.back()};
  const auto cuts = make_cuts(d, ends, tol);
  return homotopy_signature(d, path, cuts, tol);
}

PolyPath arc_length_path(const std::vector<Point>& vertices) {
  if (vertices.empty()) throw std::invalid_argument("arc_length_path: no vertices");
  std::vector<Point> pts{vertices.front()};
  std::vector<double> acc{0.0};
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    const double step = (vertices[i] - pts.back()).norm();
    if (step == 0.0) continue;
    const double s = acc.back() + step;
    if (s == acc.back()) continue;
    pts.push_back(vertices[i]);
    acc.push_back(s);
  }
  if (pts.size() == 1) return PolyPath::constant(pts.front());
  if (pts.back() != vertices.back()) pts.back() = vertices.back();
  Eigen::VectorXd params(static_cast<Eigen::Index>(pts.size()));
  PointMatrix m(2, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    params(static_cast<Eigen::Index>(i)) = acc[i] / acc.back();
    m.col(static_cast<Eigen::Index>(i)) = pts[i];
  }
  params(params.size() - 1) = 1.0;
  return PolyPath(std::move(params), std::move(m));
}

namespace {

struct ObstacleVertex {
  Point p;
  Point prev;
  Point next;
};

std::vector<ObstacleVertex> obstacle_vertices(const PolygonalDomain& d) {
  std::vector<ObstacleVertex> out;
  for (const Polygon* poly : boundaries(d)) {
    const std::size_t n = poly->size();
    for (std::size_t i = 0; i < n; ++i) out.push_back({(*poly)[i], (*poly)[(i + n - 1) % n], (*poly)[(i + 1) % n]});
  }
  return out;
}

double angle_of(const Point& v) { return std::atan2(v.y(), v.x()); }

double ccw_gap(double from, double to) {
  double g = std::fmod(to - from, 2.0 * std::numbers::pi);
  if (g < 0.0) g += 2.0 * std::numbers::pi;
  return g;
}

// Whether two open angular sectors, given by start angle and counterclockwise width, overlap.
bool sectors_overlap(double s1, double w1, double s2, double w2) {
  const double d12 = ccw_gap(s1, s2);
  const double d21 = ccw_gap(s2, s1);
  return d12 == 0.0 || d12 < w1 || d21 < w2;
}

// Whether the obstacle at vertex v reaches into the open triangle abc near v (v = b).
bool intrudes(const ObstacleVertex& v, const Point& a, const Point& c) {
  // The domain lies to the left of every boundary edge, so the obstacle sector
  // runs counterclockwise from the direction of prev to the direction of next.
  const double o_start = angle_of(v.prev - v.p);
  const double o_width = ccw_gap(o_start, angle_of(v.next - v.p));
  double t_start = angle_of(a - v.p);
  double t_end = angle_of(c - v.p);
  if (orient(v.p, a, c) < 0.0) std::swap(t_start, t_end);
  const double t_width = ccw_gap(t_start, t_end);
  if (t_width == 0.0 || o_width == 0.0) return false;
  return sectors_overlap(o_start, o_width, t_start, t_width);
}

// Counterclockwise convex hull without collinear points.
std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const Point& a, const Point& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && orient(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

class Shortener {
 public:
  Shortener(const PolygonalDomain& d, std::vector<Cut> cuts, const Tolerances& tol)
      : d_(d), cuts_(std::move(cuts)), tol_(tol), obstacles_(obstacle_vertices(d)) {}

  // Shortest replacement for the corner a -> b -> c inside triangle abc,
  // as the interior vertices of the new chain.
  std::vector<Point> tighten(const Point& a, const Point& b, const Point& c) const {
    const double o = orient(a, c, b);
    const double scale = std::max({(b - a).norm(), (c - b).norm(), (c - a).norm()});
    if (std::abs(o) <= 1e-15 * scale * scale) return {};
    const double sgn = o > 0.0 ? 1.0 : -1.0;
    auto inside = [&](const Point& v) {
      const Point tri[3] = {a, b, c};
      for (int k = 0; k < 3; ++k) {
        const Point& p = tri[k];
        const Point& q = tri[(k + 1) % 3];
        if (-sgn * orient(p, q, v) / (q - p).norm() < -tol_.geo_eps) return false;
      }
      return true;
    };
    std::vector<Point> pts{a, c};
    for (const ObstacleVertex& v : obstacles_) {
      if (v.p == a || v.p == c || !inside(v.p)) continue;
      if (v.p == b && !intrudes(v, a, c)) continue;
      pts.push_back(v.p);
    }
    if (pts.size() == 2) return {};
    const auto hull = convex_hull(pts);
    const auto ia = std::find(hull.begin(), hull.end(), a);
    const auto ic = std::find(hull.begin(), hull.end(), c);
    if (ia == hull.end() || ic == hull.end()) return {b};
    const std::size_t n = hull.size();
    std::vector<Point> chain;
    if (o > 0.0) {
      // b is left of a -> c: its side is the counterclockwise arc c .. a, walked backwards.
      for (std::size_t k = (static_cast<std::size_t>(ia - hull.begin()) + n - 1) % n;
           hull[k] != c; k = (k + n - 1) % n)
        chain.push_back(hull[k]);
    } else {
      for (std::size_t k = (static_cast<std::size_t>(ia - hull.begin()) + 1) % n; hull[k] != c; k = (k + 1) % n)
        chain.push_back(hull[k]);
    }
    return chain;
  }

  [[nodiscard]] bool same_class(std::span<const Point> before, std::span<const Point> after) const {
    return reduce_word(chain_crossings(before, cuts_)) == reduce_word(chain_crossings(after, cuts_));
  }

  [[nodiscard]] bool chain_in_closure(std::span<const Point> pts) const {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      if (!segment_in_closure(d_, pts[i], pts[i + 1], tol_)) return false;
    return true;
  }

  bool shortcut_pass(std::vector<Point>& pts) const {
    bool changed = false;
    if (pts.size() < 3) return false;
    for (std::size_t step = std::bit_floor(pts.size() - 1); step >= 2; step /= 2) {
      std::size_t i = 0;
      while (i + step < pts.size()) {
        const std::size_t j = i + step;
        const Point seg[2] = {pts[i], pts[j]};
        const std::span<const Point> sub(pts.data() + i, step + 1);
        if (segment_in_closure(d_, pts[i], pts[j], tol_) && same_class(sub, seg)) {
          pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i + 1), pts.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        } else {
          ++i;
        }
      }
    }
    return changed;
  }

  bool tighten_pass(std::vector<Point>& pts) const {
    bool changed = false;
    std::size_t k = 1;
    while (k + 1 < pts.size()) {
      const Point a = pts[k - 1];
      const Point b = pts[k];
      const Point c = pts[k + 1];
      if (a == c) {
        // Spike a -> b -> a retracts to a.
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(k), pts.begin() + static_cast<std::ptrdiff_t>(k + 2));
        changed = true;
        k = std::max<std::size_t>(1, k - 1);
        continue;
      }
      if (b == a || b == c) {
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(k));
        changed = true;
        continue;
      }
      const auto chain = tighten(a, b, c);
      if (chain.size() == 1 && chain.front() == b) {
        ++k;
        continue;
      }
      std::vector<Point> before{a, b, c};
      std::vector<Point> after{a};
      after.insert(after.end(), chain.begin(), chain.end());
      after.push_back(c);
      double old_len = (b - a).norm() + (c - b).norm();
      double new_len = 0.0;
      for (std::size_t i = 0; i + 1 < after.size(); ++i) new_len += (after[i + 1] - after[i]).norm();
      if (new_len < old_len && chain_in_closure(after) && same_class(before, after)) {
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(k));
        pts.insert(pts.begin() + static_cast<std::ptrdiff_t>(k), chain.begin(), chain.end());
        changed = true;
        k += std::max<std::size_t>(chain.size(), 1);
      } else {
        ++k;
      }
    }
    return changed;
  }

  [[nodiscard]] bool is_taut(const std::vector<Point>& pts) const {
    for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
      const bool on_vertex = std::any_of(obstacles_.begin(), obstacles_.end(),
                                         [&](const ObstacleVertex& v) { return v.p == pts[k]; });
      if (!on_vertex || pts[k - 1] == pts[k + 1]) return false;
      const auto chain = tighten(pts[k - 1], pts[k], pts[k + 1]);
      if (chain.size() != 1 || chain.front() != pts[k]) return false;
    }
    return true;
  }

 private:
  const PolygonalDomain& d_;
  std::vector<Cut> cuts_;
  const Tolerances& tol_;
  std::vector<ObstacleVertex> obstacles_;
};

double chain_length(const std::vector<Point>& pts) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) len += (pts[i + 1] - pts[i]).norm();
  return len;
}

}  // namespace

GeodesicResult shorten(const PolygonalDomain& d, const PolyPath& path, const ShortenOptions& options,
                       const Tolerances& tol) {
  const auto diag = validate_domain(d, tol);
  if (!diag.valid) throw std::invalid_argument("invalid domain: " + diag.issues.front());
  if (!path_in_closure(d, path, tol)) throw std::invalid_argument("path leaves the closure of the domain");
  const Point ends[2] = {path.front(), path.back()};
  GeodesicResult result;
  result.signature.cuts = make_cuts(d, ends, tol);
  result.signature.word = reduce_word(crossings(path, result.signature.cuts));

  if (path.front() == path.back() && result.signature.word.empty()) {
    result.polyline = PolyPath::constant(path.front());
    result.taut = true;
    return result;
  }

  const Shortener shortener(d, result.signature.cuts, tol);
  std::vector<Point> pts{path.front()};
  for (Eigen::Index i = 1; i < path.size(); ++i)
    if (path.vertex(i) != pts.back()) pts.push_back(path.vertex(i));
  if (pts.size() == 1) pts.push_back(pts.front());

  double len = chain_length(pts);
  bool converged = false;
  while (result.iterations < options.max_iter) {
    ++result.iterations;
    bool changed = shortener.shortcut_pass(pts);
    changed = shortener.tighten_pass(pts) || changed;
    const double new_len = chain_length(pts);
    const double gain = len - new_len;
    len = new_len;
    if (!changed || gain <= options.tol) {
      converged = true;
      break;
    }
  }
  result.taut = converged && shortener.is_taut(pts);
  result.polyline = arc_length_path(pts);
  if (reduce_word(crossings(result.polyline, result.signature.cuts)) != result.signature.word)
    throw std::logic_error("shorten changed the homotopy class");
  return result;
}

PolyPath visibility_geodesic(const PolygonalDomain& d, const Point& p, const Point& q, const Tolerances& tol) {
  if (!d.holes.empty()) throw std::invalid_argument("visibility_geodesic: domain must be simply connected");
  if (!point_in_closure(d, p, tol) || !point_in_closure(d, q, tol))
    throw std::invalid_argument("visibility_geodesic: endpoint outside the domain");
  if (p == q) return PolyPath::constant(p);
  std::vector<Point> nodes{p, q};
  nodes.insert(nodes.end(), d.outer.begin(), d.outer.end());
  const std::size_t n = nodes.size();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> prev(n, n);
  std::vector<bool> done(n, false);
  dist[0] = 0.0;
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  queue.push({0.0, 0});
  while (!queue.empty()) {
    const auto [du, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = true;
    if (u == 1) break;
    for (std::size_t v = 0; v < n; ++v) {
      if (done[v] || v == u) continue;
      const double w = (nodes[v] - nodes[u]).norm();
      if (du + w >= dist[v] || !segment_in_closure(d, nodes[u], nodes[v], tol)) continue;
      dist[v] = du + w;
      prev[v] = u;
      queue.push({dist[v], v});
    }
  }
  if (!done[1]) throw std::runtime_error("visibility_geodesic: endpoints not connected");
  std::vector<Point> out;
  for (std::size_t v = 1; v != n; v = prev[v]) {
    out.push_back(nodes[v]);
    if (v == 0) break;
  }
  std::reverse(out.begin(), out.end());
  return arc_length_path(out);
}

namespace {

struct Quadratic {
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;
};

struct Piece {
  double lo;
  double hi;
  Quadratic q;
};

// Squared distance from p0 + lambda u (lambda in [0, 1]) to segment [c, d], piecewise quadratic.
std::vector<Piece> distance_pieces(const Point& p0, const Point& u, const Point& c, const Point& d) {
  auto to_point = [&](const Point& x) {
    const Point w = p0 - x;
    return Quadratic{u.squaredNorm(), 2.0 * w.dot(u), w.squaredNorm()};
  };
  const Point e = d - c;
  const double ee = e.squaredNorm();
  if (ee == 0.0) return {{0.0, 1.0, to_point(c)}};
  const Point w = p0 - c;
  const double alpha = w.dot(e);
  const double beta = u.dot(e);
  const Quadratic interior{u.squaredNorm() - beta * beta / ee, 2.0 * (w.dot(u) - alpha * beta / ee),
                           w.squaredNorm() - alpha * alpha / ee};
  std::vector<double> breaks{0.0, 1.0};
  if (beta != 0.0) {
    for (const double target : {0.0, ee}) {
      const double l = (target - alpha) / beta;
      if (l > 0.0 && l < 1.0) breaks.push_back(l);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  std::vector<Piece> out;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double mid = 0.5 * (breaks[k] + breaks[k + 1]);
    const double m = (alpha + beta * mid) / ee;
    const Quadratic q = m < 0.0 ? to_point(c) : (m > 1.0 ? to_point(d) : interior);
    out.push_back({breaks[k], breaks[k + 1], q});
  }
  return out;
}

void quadratic_roots(const Quadratic& q, double lo, double hi, std::vector<double>& out) {
  const double scale = std::max({std::abs(q.c2), std::abs(q.c1), std::abs(q.c0)});
  if (scale == 0.0) return;
  auto keep = [&](double r) {
    if (r >= lo && r <= hi) out.push_back(r);
  };
  if (std::abs(q.c2) <= 1e-14 * scale) {
    if (q.c1 != 0.0) keep(-q.c0 / q.c1);
    return;
  }
  const double disc = q.c1 * q.c1 - 4.0 * q.c2 * q.c0;
  if (disc < 0.0) return;
  const double s = std::sqrt(disc);
  const double t = -0.5 * (q.c1 + (q.c1 >= 0.0 ? s : -s));
  if (t != 0.0) keep(q.c0 / t);
  keep(t / q.c2);
}

std::vector<std::pair<Point, Point>> segments_of(const PolyPath& p) {
  std::vector<std::pair<Point, Point>> out;
  if (p.size() == 1) out.push_back({p.front(), p.front()});
  for (Eigen::Index i = 0; i + 1 < p.size(); ++i) out.push_back({p.vertex(i), p.vertex(i + 1)});
  return out;
}

// max over points of a of the squared distance to b.
double directed_sq(const PolyPath& a, const PolyPath& b) {
  const auto sa = segments_of(a);
  const auto sb = segments_of(b);
  auto dist_sq = [&](const Point& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [c, d] : sb) {
      const double r = point_segment_distance(x, c, d);
      best = std::min(best, r * r);
    }
    return best;
  };
  double result = 0.0;
  std::vector<double> roots;
  for (const auto& [p0, p1] : sa) {
    result = std::max({result, dist_sq(p0), dist_sq(p1)});
    const Point u = p1 - p0;
    if (u.squaredNorm() == 0.0) continue;
    std::vector<std::vector<Piece>> pieces;
    pieces.reserve(sb.size());
    for (const auto& [c, d] : sb) pieces.push_back(distance_pieces(p0, u, c, d));
    // Interior maxima of the lower envelope of convex functions occur where two of them cross.
    for (std::size_t i = 0; i < pieces.size(); ++i)
      for (std::size_t j = i + 1; j < pieces.size(); ++j)
        for (const Piece& pi : pieces[i])
          for (const Piece& pj : pieces[j]) {
            const double lo = std::max(pi.lo, pj.lo);
            const double hi = std::min(pi.hi, pj.hi);
            if (lo >= hi) continue;
            roots.clear();
            quadratic_roots({pi.q.c2 - pj.q.c2, pi.q.c1 - pj.q.c1, pi.q.c0 - pj.q.c0}, lo, hi, roots);
            for (const double r : roots) {
              const double guess = pi.q.c2 * r * r + pi.q.c1 * r + pi.q.c0;
              if (guess * (1.0 + 1e-9) + 1e-300 <= result) continue;
              result = std::max(result, dist_sq(p0 + r * u));
            }
          }
  }
  return result;
}

}  // namespace

double hausdorff(const PolyPath& a, const PolyPath& b) { return std::sqrt(std::max(directed_sq(a, b), directed_sq(b, a))); }

}  // namespace plen
