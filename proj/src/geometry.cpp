#include "plen/geometry.hpp"

#include <algorithm>
#include <numeric>

namespace plen {

void require_valid(const StripParams& p) {
  if (!p.valid()) throw std::invalid_argument("strip parameters require finite x, t and mu in (0, 1]");
}

namespace {

void check_finite(const PointMatrix& v) {
  if (!v.allFinite()) throw std::invalid_argument("non-finite coordinates");
}

}  // namespace

PolyPath::PolyPath() : params_(Eigen::VectorXd::Zero(1)), vertices_(PointMatrix::Zero(2, 1)) {}

PolyPath::PolyPath(PointMatrix vertices) : vertices_(std::move(vertices)) {
  if (vertices_.cols() == 0) throw std::invalid_argument("path needs at least one vertex");
  check_finite(vertices_);
  const Eigen::Index n = vertices_.cols();
  params_.resize(n);
  if (n == 1) {
    params_(0) = 0.0;
    return;
  }
  for (Eigen::Index i = 0; i < n; ++i) params_(i) = static_cast<double>(i) / static_cast<double>(n - 1);
  params_(n - 1) = 1.0;
}

PolyPath::PolyPath(Eigen::VectorXd params, PointMatrix vertices)
    : params_(std::move(params)), vertices_(std::move(vertices)) {
  const Eigen::Index n = vertices_.cols();
  if (n == 0) throw std::invalid_argument("path needs at least one vertex");
  if (params_.size() != n) throw std::invalid_argument("params and vertices differ in length");
  check_finite(vertices_);
  if (!params_.allFinite()) throw std::invalid_argument("non-finite parameter");
  if (n == 1) {
    if (params_(0) != 0.0) throw std::invalid_argument("constant path must have parameter 0");
    return;
  }
  if (params_(0) != 0.0 || params_(n - 1) != 1.0)
    throw std::invalid_argument("path parameters must run from 0 to 1");
  for (Eigen::Index i = 1; i < n; ++i)
    if (!(params_(i) > params_(i - 1))) throw std::invalid_argument("path parameters must be strictly increasing");
}

PolyPath PolyPath::constant(const Point& p) {
  PointMatrix v(2, 1);
  v.col(0) = p;
  return PolyPath(std::move(v));
}

Eigen::Index PolyPath::segment_index(double s) const {
  const Eigen::Index n = size();
  if (n < 2) return 0;
  const double* begin = params_.data();
  const double* it = std::upper_bound(begin, begin + n, s);
  Eigen::Index i = static_cast<Eigen::Index>(it - begin) - 1;
  return std::clamp<Eigen::Index>(i, 0, n - 2);
}

Point PolyPath::operator()(double s) const {
  if (size() == 1) return vertex(0);
  const Eigen::Index i = segment_index(s);
  const double s0 = params_(i);
  const double s1 = params_(i + 1);
  if (s == s0) return vertex(i);
  if (s == s1) return vertex(i + 1);
  const double lambda = (s - s0) / (s1 - s0);
  return vertex(i) + lambda * (vertex(i + 1) - vertex(i));
}

bool PolyPath::is_constant() const {
  for (Eigen::Index i = 1; i < size(); ++i)
    if (vertex(i) != vertex(0)) return false;
  return true;
}

PLGraphMap::PLGraphMap(std::vector<std::string> ids, PointMatrix positions, std::vector<Edge> edges)
    : ids_(std::move(ids)), positions_(std::move(positions)), edges_(std::move(edges)) {
  const Eigen::Index n = positions_.cols();
  if (n == 0) throw std::invalid_argument("graph needs at least one node");
  if (static_cast<Eigen::Index>(ids_.size()) != n) throw std::invalid_argument("graph ids and positions differ in length");
  check_finite(positions_);
  std::vector<std::string> sorted = ids_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("graph node ids must be unique");

  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  Eigen::Index components = n;
  for (const Edge& e : edges_) {
    if (e[0] < 0 || e[1] < 0 || e[0] >= n || e[1] >= n) throw std::invalid_argument("edge endpoint does not exist");
    const Eigen::Index a = find(e[0]);
    const Eigen::Index b = find(e[1]);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  if (components != 1) throw std::invalid_argument("graph must be connected");
}

PLGraphMap PLGraphMap::from_path(const PolyPath& path) {
  std::vector<std::string> ids;
  std::vector<Edge> edges;
  for (Eigen::Index i = 0; i < path.size(); ++i) {
    ids.push_back("n" + std::to_string(i));
    if (i > 0) edges.push_back({i - 1, i});
  }
  return PLGraphMap(std::move(ids), path.vertices(), std::move(edges));
}

bool PLGraphMap::is_tree() const {
  // Connected by construction, so a tree iff |E| = |V| - 1.
  return static_cast<Eigen::Index>(edges_.size()) == node_count() - 1;
}

PLGraphMap edge_subgraph(const PLGraphMap& g, const std::vector<std::size_t>& edge_indices) {
  std::vector<Eigen::Index> remap(static_cast<std::size_t>(g.node_count()), -1);
  std::vector<std::string> ids;
  std::vector<Point> pts;
  std::vector<PLGraphMap::Edge> edges;
  auto node = [&](Eigen::Index v) {
    if (remap[v] < 0) {
      remap[v] = static_cast<Eigen::Index>(ids.size());
      ids.push_back(g.ids()[v]);
      pts.push_back(g.position(v));
    }
    return remap[v];
  };
  for (std::size_t k : edge_indices) {
    const auto& e = g.edges().at(k);
    const Eigen::Index a = node(e[0]);
    const Eigen::Index b = node(e[1]);
    edges.push_back({a, b});
  }
  if (ids.empty()) throw std::invalid_argument("edge_subgraph: no edges selected");
  PointMatrix m(2, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = pts[i];
  return PLGraphMap(std::move(ids), std::move(m), std::move(edges));
}

PolyPath restrict(const PolyPath& path, double s1, double s2) {
  if (!(0.0 <= s1 && s1 <= s2 && s2 <= 1.0)) throw std::invalid_argument("restrict requires 0 <= s1 <= s2 <= 1");
  if (s1 == s2 || path.size() == 1) return PolyPath::constant(path(s1));
  if (s1 == 0.0 && s2 == 1.0) return path;

  std::vector<double> params{0.0};
  std::vector<Point> pts{path(s1)};
  const double width = s2 - s1;
  for (Eigen::Index i = 0; i < path.size(); ++i) {
    const double s = path.param(i);
    if (s <= s1 || s >= s2) continue;
    const double r = (s - s1) / width;
    if (r <= params.back() || r >= 1.0) continue;
    params.push_back(r);
    pts.push_back(path.vertex(i));
  }
  params.push_back(1.0);
  pts.push_back(path(s2));

  const auto n = static_cast<Eigen::Index>(params.size());
  Eigen::VectorXd p(n);
  PointMatrix v(2, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    p(i) = params[static_cast<std::size_t>(i)];
    v.col(i) = pts[static_cast<std::size_t>(i)];
  }
  return PolyPath(std::move(p), std::move(v));
}

PolyPath reversed(const PolyPath& path) {
  const Eigen::Index n = path.size();
  if (n == 1) return path;
  Eigen::VectorXd p(n);
  for (Eigen::Index i = 0; i < n; ++i) p(i) = 1.0 - path.param(n - 1 - i);
  p(0) = 0.0;
  p(n - 1) = 1.0;
  return PolyPath(std::move(p), path.vertices().rowwise().reverse());
}

double diameter(const PointMatrix& points) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < points.cols(); ++i)
    for (Eigen::Index j = i + 1; j < points.cols(); ++j)
      best = std::max(best, (points.col(i) - points.col(j)).squaredNorm());
  return std::sqrt(best);
}

double euclidean_length(const PolyPath& path) {
  double total = 0.0;
  for (Eigen::Index i = 1; i < path.size(); ++i) total += (path.vertex(i) - path.vertex(i - 1)).norm();
  return total;
}

PointMatrix RigidMotion::operator()(const PointMatrix& points) const {
  PointMatrix out = points;
  if (reflect) out.row(1) = -out.row(1);
  const Eigen::Rotation2Dd rotation(turn * std::numbers::pi);
  out = (rotation.toRotationMatrix() * out).colwise() + translation;
  return out;
}

PolyPath apply_isometry(const PolyPath& path, const RigidMotion& motion) {
  return PolyPath(path.params(), motion(path.vertices()));
}

PLGraphMap apply_isometry(const PLGraphMap& g, const RigidMotion& motion) {
  return PLGraphMap(g.ids(), motion(g.positions()), g.edges());
}

}  // namespace plen
