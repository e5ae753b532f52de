#include "plen/reparam.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace plen {

StandardRepresentation standard_representation(const PolyPath& path, int n_out, const SampleBudget& budget,
                                               Method method, const Tolerances& tol) {
  if (n_out < 2) throw std::invalid_argument("standard_representation: n_out must be >= 2");
  StandardRepresentation out;
  if (path.is_constant()) {
    out.path = PolyPath::constant(path.front());
    out.degenerate_domain = true;
    return out;
  }
  const auto base = static_cast<std::size_t>(std::max<Eigen::Index>(256, 4 * path.size()));
  std::vector<double> grid(base + 1);
  for (std::size_t k = 0; k <= base; ++k) grid[k] = static_cast<double>(k) / static_cast<double>(base);
  std::vector<double> profile = cumulative_profile(path, grid, budget, method, tol);

  // One refinement level where the profile is nearly flat.
  const double flat = profile.back() / (4.0 * static_cast<double>(base));
  std::vector<double> refined;
  refined.reserve(2 * grid.size());
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    refined.push_back(grid[k]);
    if (profile[k + 1] - profile[k] < flat) refined.push_back(0.5 * (grid[k] + grid[k + 1]));
  }
  refined.push_back(grid.back());
  if (refined.size() != grid.size()) {
    grid = std::move(refined);
    profile = cumulative_profile(path, grid, budget, method, tol);
  }
  out.grid_size = grid.size();
  out.total_length = profile.back();
  if (!(out.total_length > 0.0)) {
    out.path = PolyPath::constant(path.front());
    out.degenerate_domain = true;
    return out;
  }

  PointMatrix vertices(2, n_out);
  std::size_t j = 0;
  for (int k = 0; k < n_out; ++k) {
    const double target =
        k + 1 == n_out ? out.total_length : out.total_length * static_cast<double>(k) / (n_out - 1);
    while (j < profile.size() && profile[j] < target) ++j;
    j = std::min(j, profile.size() - 1);
    double s = grid[j];
    // First parameter reaching the target; plateaus collapse to their left end.
    if (j > 0 && profile[j] > target) {
      const double frac = (target - profile[j - 1]) / (profile[j] - profile[j - 1]);
      s = grid[j - 1] + frac * (grid[j] - grid[j - 1]);
    }
    vertices.col(k) = path(s);
  }
  out.path = PolyPath(std::move(vertices));
  return out;
}

namespace {

// Smallest lambda in [0, 1] with |d + lambda u| >= r, or a negative value if none.
double first_reach(const Point& d, const Point& u, double r) {
  const double c = d.squaredNorm() - r * r;
  if (c >= 0.0) return 0.0;
  const double a = u.squaredNorm();
  if (a == 0.0) return -1.0;
  const double b = d.dot(u);
  const double root = std::sqrt(b * b - a * c);
  const double lambda = b <= 0.0 ? (root - b) / a : -c / (b + root);
  return lambda <= 1.0 ? lambda : -1.0;
}

}  // namespace

std::int64_t disjoint_interval_count(const PolyPath& path, double eps, const Tolerances& tol) {
  if (!(eps > 0.0)) throw std::invalid_argument("disjoint_interval_count: eps must be > 0");
  const double target = eps > 2.0 * tol.float_eps ? eps - tol.float_eps : eps;
  std::int64_t count = 0;
  std::vector<Point> seen{path.front()};
  Point a = path.front();
  double s_a = path.param(0);
  Eigen::Index i = 0;
  while (i + 1 < path.size()) {
    const Point b = path.vertex(i + 1);
    const double s_b = path.param(i + 1);
    const Point u = b - a;
    double best = -1.0;
    for (const Point& p : seen) {
      const double lambda = first_reach(a - p, u, target);
      if (lambda >= 0.0 && (best < 0.0 || lambda < best)) best = lambda;
    }
    if (best >= 0.0) {
      ++count;
      a = best == 1.0 ? b : Point(a + best * u);
      s_a = s_a + best * (s_b - s_a);
      seen.assign(1, a);
      if (best == 1.0) ++i;
      continue;
    }
    seen.push_back(b);
    a = b;
    s_a = s_b;
    ++i;
  }
  return count;
}

std::int64_t length_interval_count(const PolyPath& path, double eps, const SampleBudget& budget, Method method,
                                   const Tolerances& tol) {
  if (!(eps > 0.0)) throw std::invalid_argument("length_interval_count: eps must be > 0");
  auto len = [&](double s1, double s2) {
    return estimate_length(Curve(restrict(path, s1, s2)), budget, method, tol).value;
  };
  std::int64_t count = 0;
  double a = 0.0;
  while (a < 1.0 && len(a, 1.0) >= eps) {
    double lo = a;
    double hi = 1.0;
    for (int iter = 0; iter < 48 && hi - lo > 1e-12; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (len(a, mid) >= eps) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    ++count;
    a = hi;
  }
  return count;
}

namespace {

// A point of the path as anchor vertex plus offset, so that windows of width
// far below the parameter resolution still give correct tiny distances.
struct Anchored {
  Eigen::Index anchor;
  Point offset;
};

double anchored_distance(const PolyPath& path, const Anchored& p, const Anchored& q) {
  Point d = p.offset - q.offset;
  if (p.anchor != q.anchor) d += path.vertex(p.anchor) - path.vertex(q.anchor);
  return d.norm();
}

Point velocity(const PolyPath& path, Eigen::Index seg) {
  return (path.vertex(seg + 1) - path.vertex(seg)) / (path.param(seg + 1) - path.param(seg));
}

double window_diameter(const PolyPath& path, const std::vector<Anchored>& pts) {
  double best = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) best = std::max(best, anchored_distance(path, pts[a], pts[b]));
  return best;
}

}  // namespace

double modulus_of_continuity(const PolyPath& path, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("modulus_of_continuity: delta must be > 0");
  if (path.is_constant()) return 0.0;
  if (delta >= 1.0) return diameter(path);
  // The window diameter is a maximum of convex functions of s between
  // breakpoint events, so its maximum is attained with one window end on a breakpoint.
  const Eigen::Index n = path.size();
  double best = 0.0;
  std::vector<Anchored> pts;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s_i = path.param(i);
    if (1.0 - s_i >= delta) {
      pts.assign(1, {i, Point::Zero()});
      Eigen::Index k = i;
      while (k + 1 < n && path.param(k + 1) - s_i <= delta) pts.push_back({++k, Point::Zero()});
      const double rest = delta - (path.param(k) - s_i);
      if (rest > 0.0 && k + 1 < n) pts.push_back({k, rest * velocity(path, k)});
      best = std::max(best, window_diameter(path, pts));
    }
    if (s_i >= delta) {
      pts.assign(1, {i, Point::Zero()});
      Eigen::Index k = i;
      while (k > 0 && s_i - path.param(k - 1) <= delta) pts.push_back({--k, Point::Zero()});
      const double rest = delta - (s_i - path.param(k));
      if (rest > 0.0 && k > 0) pts.push_back({k, -rest * velocity(path, k - 1)});
      best = std::max(best, window_diameter(path, pts));
    }
  }
  return best;
}

EquicontinuityReport equicontinuity_delta(std::span<const PolyPath> family, double eps, const Tolerances& tol) {
  if (family.empty()) throw std::invalid_argument("equicontinuity_delta: empty family");
  if (!(eps > 0.0)) throw std::invalid_argument("equicontinuity_delta: eps must be > 0");
  EquicontinuityReport report;
  report.epsilon = eps;
  report.family_size = family.size();
  for (const PolyPath& p : family) {
    report.member_counts.push_back(disjoint_interval_count(p, eps / 16.0, tol));
    report.N = std::max(report.N, report.member_counts.back());
  }
  report.delta = std::ldexp(eps * eps, -static_cast<int>(std::min<std::int64_t>(report.N + 8, 1 << 20)));
  return report;
}

}  // namespace plen
