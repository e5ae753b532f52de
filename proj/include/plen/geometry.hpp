#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace plen {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;
using Point = Point2<double>;

/// Columns are plane points.
using PointMatrix = Eigen::Matrix2Xd;

struct Tolerances {
  double degenerate_extent = 0.0;  // extents <= this are not components
  double float_eps = 1e-12;
  double geo_eps = 1e-9;  // domain predicates
};

/// One strip family: closed strips of width mu, turned by t half-turns and
/// shifted by x strip widths along the normal direction.
struct StripParams {
  double x = 0.0;
  double t = 0.0;
  double mu = 1.0;

  [[nodiscard]] bool valid() const {
    return std::isfinite(x) && std::isfinite(t) && std::isfinite(mu) && mu > 0.0 && mu <= 1.0;
  }
};

void require_valid(const StripParams& p);

/// Unit normal to the strips, e^{(t+1/2) pi i}.
inline Point strip_normal(double t) {
  return {-std::sin(t * std::numbers::pi), std::cos(t * std::numbers::pi)};
}

/// Strip coordinate h(z) = Im(e^{-t pi i} z) / mu - x; z lies in strip j iff
/// h(z) is in [j, j+1]. Works on a single point or on a 2xN block of points.
template <typename Derived>
auto strip_coordinate(const Eigen::MatrixBase<Derived>& z, const StripParams& p) {
  using Scalar = typename Derived::Scalar;
  const Scalar c = std::cos(p.t * std::numbers::pi);
  const Scalar s = std::sin(p.t * std::numbers::pi);
  if constexpr (Derived::ColsAtCompileTime == 1) {
    return Scalar((z(1) * c - z(0) * s) / p.mu - p.x);
  } else {
    return Eigen::Array<Scalar, 1, Eigen::Dynamic>(
        (z.row(1).array() * c - z.row(0).array() * s) / p.mu - p.x);
  }
}

/// ||A||_t: width of the projection of the points onto the strip normal.
template <typename Derived>
typename Derived::Scalar perp_extent(const Eigen::MatrixBase<Derived>& points, double t) {
  using Scalar = typename Derived::Scalar;
  if (points.cols() == 0) throw std::invalid_argument("perp_extent: empty point set");
  const Scalar c = std::cos(t * std::numbers::pi);
  const Scalar s = std::sin(t * std::numbers::pi);
  const auto proj = (points.row(1).array() * c - points.row(0).array() * s).eval();
  return proj.maxCoeff() - proj.minCoeff();
}

/// Piecewise-linear path [0,1] -> plane with explicit parameter breakpoints.
/// A single breakpoint is a constant path.
class PolyPath {
 public:
  PolyPath();
  /// Breakpoints uniformly spaced on [0,1].
  explicit PolyPath(PointMatrix vertices);
  PolyPath(Eigen::VectorXd params, PointMatrix vertices);

  static PolyPath constant(const Point& p);

  [[nodiscard]] Eigen::Index size() const { return params_.size(); }
  [[nodiscard]] const Eigen::VectorXd& params() const { return params_; }
  [[nodiscard]] const PointMatrix& vertices() const { return vertices_; }
  [[nodiscard]] double param(Eigen::Index i) const { return params_(i); }
  [[nodiscard]] Point vertex(Eigen::Index i) const { return vertices_.col(i); }
  [[nodiscard]] Point front() const { return vertices_.col(0); }
  [[nodiscard]] Point back() const { return vertices_.col(size() - 1); }

  /// Index i of the segment [s_i, s_{i+1}] containing s (last segment for s = 1).
  [[nodiscard]] Eigen::Index segment_index(double s) const;
  [[nodiscard]] Point operator()(double s) const;
  [[nodiscard]] bool is_constant() const;

 private:
  Eigen::VectorXd params_;
  PointMatrix vertices_;
};

/// Finite connected graph with plane coordinates at the nodes, linear on edges.
class PLGraphMap {
 public:
  using Edge = std::array<Eigen::Index, 2>;

  PLGraphMap(std::vector<std::string> ids, PointMatrix positions, std::vector<Edge> edges);

  /// Chain graph n0 - n1 - ... following the path's vertices.
  static PLGraphMap from_path(const PolyPath& path);

  [[nodiscard]] Eigen::Index node_count() const { return positions_.cols(); }
  [[nodiscard]] const std::vector<std::string>& ids() const { return ids_; }
  [[nodiscard]] const PointMatrix& positions() const { return positions_; }
  [[nodiscard]] Point position(Eigen::Index i) const { return positions_.col(i); }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] bool is_tree() const;

 private:
  std::vector<std::string> ids_;
  PointMatrix positions_;
  std::vector<Edge> edges_;
};

/// Subgraph spanned by the given edges (nodes renumbered, ids kept).
PLGraphMap edge_subgraph(const PLGraphMap& g, const std::vector<std::size_t>& edge_indices);

/// gamma restricted to [s1, s2], domain rescaled to [0, 1].
PolyPath restrict(const PolyPath& path, double s1, double s2);
PolyPath reversed(const PolyPath& path);

double diameter(const PointMatrix& points);
inline double diameter(const PolyPath& path) { return diameter(path.vertices()); }
inline double diameter(const PLGraphMap& g) { return diameter(g.positions()); }

double euclidean_length(const PolyPath& path);

/// Reflection (x,y) -> (x,-y) if requested, then rotation by `turn` half-turns
/// about the origin, then translation.
struct RigidMotion {
  double turn = 0.0;
  Point translation = Point::Zero();
  bool reflect = false;

  [[nodiscard]] PointMatrix operator()(const PointMatrix& points) const;
};

PolyPath apply_isometry(const PolyPath& path, const RigidMotion& motion);
PLGraphMap apply_isometry(const PLGraphMap& g, const RigidMotion& motion);

inline double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Twice the signed area of (a, b, c); positive for a left turn.
inline double orient(const Point& a, const Point& b, const Point& c) { return cross(b - a, c - a); }

}  // namespace plen
