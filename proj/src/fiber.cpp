#include "plen/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace plen {

namespace {

// Strips containing a linear piece with end values a and b, where the open
// piece contains no integer. Returns the count (1 or 2) and fills `out`.
int strips_of(double a, double b, std::int64_t out[2]) {
  if (a == b) {
    const double f = std::floor(a);
    if (f == a) {
      out[0] = static_cast<std::int64_t>(f) - 1;
      out[1] = static_cast<std::int64_t>(f);
      return 2;
    }
    out[0] = static_cast<std::int64_t>(f);
    return 1;
  }
  out[0] = static_cast<std::int64_t>(std::floor(std::min(a, b)));
  return 1;
}

// Integers strictly between the two values, as [first, last] (empty if first > last).
std::pair<std::int64_t, std::int64_t> interior_integers(double a, double b) {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  return {static_cast<std::int64_t>(std::floor(lo)) + 1, static_cast<std::int64_t>(std::ceil(hi)) - 1};
}

void require_finite(const Eigen::Array<double, 1, Eigen::Dynamic>& h) {
  if (!h.allFinite()) throw std::invalid_argument("non-finite strip coordinate");
}

bool component_less(const FiberComponent& a, const FiberComponent& b) {
#ifdef PLEN_FAULT_INJECT_SORT
  if (a.extent != b.extent) return a.extent < b.extent;
#else
  if (a.extent != b.extent) return a.extent > b.extent;
#endif
  if (a.strip_index != b.strip_index) return a.strip_index < b.strip_index;
  return a.s_lo < b.s_lo;
}

void finish(FiberDecomposition& out) {
  std::sort(out.components.begin(), out.components.end(), component_less);
  std::vector<double> extents;
  extents.reserve(out.components.size());
  for (const auto& c : out.components) extents.push_back(c.extent);
  out.value = weighted_sum<double>(extents);
}

// Maximal runs of consecutive pieces sharing a strip. At most two strips are
// active at once (a piece lies in one strip, or two when constant on a boundary).
struct Run {
  std::int64_t strip = 0;
  double s_lo = 0.0;
  double s_hi = 0.0;
  double h_min = 0.0;
  double h_max = 0.0;
};

template <typename Close>
class RunTracker {
 public:
  explicit RunTracker(Close close) : close_(std::move(close)) {}

  void piece(double s_a, double s_b, double h_a, double h_b) {
    std::int64_t strips[2];
    const int n = strips_of(h_a, h_b, strips);
    const double lo = std::min(h_a, h_b);
    const double hi = std::max(h_a, h_b);
    for (int k = count_ - 1; k >= 0; --k) {
      const bool kept = runs_[k].strip == strips[0] || (n == 2 && runs_[k].strip == strips[1]);
      if (!kept) {
        close_(runs_[k]);
        runs_[k] = runs_[count_ - 1];
        --count_;
      }
    }
    for (int i = 0; i < n; ++i) {
      Run* run = nullptr;
      for (int k = 0; k < count_; ++k)
        if (runs_[k].strip == strips[i]) run = &runs_[k];
      if (run) {
        run->s_hi = s_b;
        run->h_min = std::min(run->h_min, lo);
        run->h_max = std::max(run->h_max, hi);
      } else {
        runs_[count_++] = Run{strips[i], s_a, s_b, lo, hi};
      }
    }
  }

  void close_all() {
    // Close in strip order so the emitted sequence does not depend on slot layout.
    if (count_ == 2 && runs_[0].strip > runs_[1].strip) std::swap(runs_[0], runs_[1]);
    for (int k = 0; k < count_; ++k) close_(runs_[k]);
    count_ = 0;
  }

  [[nodiscard]] int active() const { return count_; }
  [[nodiscard]] const Run& run(int k) const { return runs_[k]; }

 private:
  Close close_;
  Run runs_[2];
  int count_ = 0;
};

// Walks one linear piece of h from (s_a, h_a) to (s_b, h_b), splitting it at
// interior integers. Full-width sub-pieces strictly inside cannot join any
// other piece; when `bulk` is set they are reported as a count instead.
template <typename Piece, typename Bulk>
void subdivide(double s_a, double s_b, double h_a, double h_b, bool bulk, Piece&& piece, Bulk&& on_bulk) {
  const auto [first, last] = interior_integers(h_a, h_b);
  if (h_a == h_b || first > last) {
    piece(s_a, s_b, h_a, h_b);
    return;
  }
  const bool up = h_b > h_a;
  const double slope = (s_b - s_a) / (h_b - h_a);
  auto cross_at = [&](std::int64_t k) {
    const double s = s_a + (static_cast<double>(k) - h_a) * slope;
    return std::clamp(s, std::min(s_a, s_b), std::max(s_a, s_b));
  };
  const std::int64_t n = last - first + 1;
  const std::int64_t k0 = up ? first : last;
  const std::int64_t kn = up ? last : first;
  const double s0 = cross_at(k0);
  piece(s_a, s0, h_a, static_cast<double>(k0));
  double s_prev = s0;
  if (bulk) {
    if (n > 1) on_bulk(n - 1);
    s_prev = cross_at(kn);
  } else {
    const std::int64_t step = up ? 1 : -1;
    for (std::int64_t k = k0; k != kn; k += step) {
      const double s_next = std::max(s_prev, cross_at(k + step));
      piece(s_prev, s_next, static_cast<double>(k), static_cast<double>(k + step));
      s_prev = s_next;
    }
  }
  piece(s_prev, s_b, static_cast<double>(kn), h_b);
}

// Disjoint-set forest over a compact index range.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

struct GraphPiece {
  std::int64_t strip = 0;
  std::size_t node_a = 0;
  std::size_t node_b = 0;
  double h_min = 0.0;
  double h_max = 0.0;
  EdgeSpan span;
};

// Pieces of the integer-subdivided graph, one entry per (piece, strip).
// Subdivision nodes get ids past the original node range.
std::vector<GraphPiece> graph_pieces(const PLGraphMap& g, const Eigen::Array<double, 1, Eigen::Dynamic>& h, bool bulk,
                                     std::int64_t& bulk_full) {
  std::vector<GraphPiece> pieces;
  std::size_t next_node = static_cast<std::size_t>(g.node_count());
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto [u, v] = g.edges()[e];
    const double hu = h(u);
    const double hv = h(v);
    std::size_t from = static_cast<std::size_t>(u);
    double tau_end = 0.0;
    auto emit = [&](double tau_a, double tau_b, double ha, double hb) {
      const bool at_end = tau_b == 1.0 && hb == hv;
      const std::size_t to = at_end ? static_cast<std::size_t>(v) : next_node++;
      std::int64_t strips[2];
      const int n = strips_of(ha, hb, strips);
      for (int i = 0; i < n; ++i)
        pieces.push_back({strips[i], from, to, std::min(ha, hb), std::max(ha, hb), {e, tau_a, tau_b}});
      from = to;
      tau_end = tau_b;
    };
    auto on_bulk = [&](std::int64_t count) {
      bulk_full += count;
      // The skipped pieces are self-contained; the next emitted piece starts
      // at a fresh subdivision node.
      from = next_node++;
    };
    subdivide(0.0, 1.0, hu, hv, bulk, emit, on_bulk);
    (void)tau_end;
  }
  return pieces;
}

// Groups graph pieces by strip and yields (strip, pieces-of-one-component) via union-find.
template <typename Emit>
void graph_components(std::vector<GraphPiece>& pieces, Emit&& emit) {
  std::sort(pieces.begin(), pieces.end(), [](const GraphPiece& a, const GraphPiece& b) {
    if (a.strip != b.strip) return a.strip < b.strip;
    if (a.span.edge != b.span.edge) return a.span.edge < b.span.edge;
    return a.span.tau_lo < b.span.tau_lo;
  });
  std::size_t begin = 0;
  std::vector<std::size_t> nodes;
  while (begin < pieces.size()) {
    std::size_t end = begin;
    while (end < pieces.size() && pieces[end].strip == pieces[begin].strip) ++end;
    nodes.clear();
    for (std::size_t i = begin; i < end; ++i) {
      nodes.push_back(pieces[i].node_a);
      nodes.push_back(pieces[i].node_b);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    auto local = [&](std::size_t id) {
      return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), id) - nodes.begin());
    };
    DisjointSets sets(nodes.size());
    for (std::size_t i = begin; i < end; ++i) sets.unite(local(pieces[i].node_a), local(pieces[i].node_b));
    std::vector<std::vector<const GraphPiece*>> groups(nodes.size());
    for (std::size_t i = begin; i < end; ++i) groups[sets.find(local(pieces[i].node_a))].push_back(&pieces[i]);
    for (const auto& group : groups)
      if (!group.empty()) emit(pieces[begin].strip, group);
    begin = end;
  }
}

}  // namespace

template <typename Real>
Real weighted_sum(std::span<const double> sorted_extents) {
  Real sum = 0;
  Real weight = 1;
  const std::size_t n = std::min<std::size_t>(sorted_extents.size(), kSumTerms<Real>);
  for (std::size_t i = 0; i < n; ++i) {
    sum += Real(sorted_extents[i]) * weight;
    weight /= 2;
  }
  return sum;
}

template double weighted_sum<double>(std::span<const double>);
template quad weighted_sum<quad>(std::span<const double>);

namespace detail {

void ExtentAccumulator::add(double extent) {
  if (extent == mu_) {
    ++full_;
    return;
  }
  if (static_cast<int>(partial_.size()) == keep_ && !(extent > partial_.back())) return;
  auto it = std::upper_bound(partial_.begin(), partial_.end(), extent, std::greater<>());
  partial_.insert(it, extent);
  if (static_cast<int>(partial_.size()) > keep_) partial_.pop_back();
}

template <typename Real>
Real ExtentAccumulator::value(double extra0, double extra1) const {
  if (extra1 > extra0) std::swap(extra0, extra1);
  Real sum = 0;
  Real weight = 1;
  int rank = 0;
  const std::int64_t full = std::min<std::int64_t>(full_, kSumTerms<Real>);
  for (; rank < full; ++rank) {
    sum += Real(mu_) * weight;
    weight /= 2;
  }
  std::size_t i = 0;
  double extras[2] = {extra0, extra1};
  int e = 0;
  while (rank < kSumTerms<Real>) {
    const bool have_p = i < partial_.size();
    const bool have_e = e < 2 && extras[e] > 0.0;
    if (!have_p && !have_e) break;
    double next;
    if (have_e && (!have_p || extras[e] > partial_[i])) {
      next = extras[e++];
    } else {
      next = partial_[i++];
    }
    sum += Real(next) * weight;
    weight /= 2;
    ++rank;
  }
  return sum;
}

double ExtentAccumulator::deficit() const {
  // 2 mu - sum_n e_n / 2^n = sum_n (mu - e_n) / 2^n + 2 mu / 2^N, and the
  // full-width terms contribute only the common factor 2^-full.
  double sum = 0.0;
  double weight = 1.0;
  for (const double e : partial_) {
    sum += (mu_ - e) * weight;
    weight *= 0.5;
  }
  sum += 2.0 * mu_ * weight;
  return std::ldexp(sum, -static_cast<int>(std::min<std::int64_t>(full_, 2000)));
}

template double ExtentAccumulator::value<double>(double, double) const;
template quad ExtentAccumulator::value<quad>(double, double) const;

}  // namespace detail

FiberDecomposition decompose_path(const PolyPath& path, const StripParams& p, const Tolerances& tol) {
  require_valid(p);
  FiberDecomposition out;
  out.params = p;
  const auto h = strip_coordinate(path.vertices(), p);
  require_finite(h);

  auto close = [&](const Run& run) {
    const double extent = p.mu * (run.h_max - run.h_min);
    if (extent > tol.degenerate_extent) out.components.push_back({run.strip, run.s_lo, run.s_hi, extent, {}});
  };
  RunTracker tracker(close);
  auto piece = [&](double sa, double sb, double ha, double hb) { tracker.piece(sa, sb, ha, hb); };
  auto no_bulk = [](std::int64_t) {};
  for (Eigen::Index i = 0; i + 1 < path.size(); ++i)
    subdivide(path.param(i), path.param(i + 1), h(i), h(i + 1), false, piece, no_bulk);
  tracker.close_all();
  finish(out);
  return out;
}

FiberDecomposition decompose_graph(const PLGraphMap& g, const StripParams& p, const Tolerances& tol) {
  require_valid(p);
  FiberDecomposition out;
  out.params = p;
  const auto h = strip_coordinate(g.positions(), p);
  require_finite(h);
  std::int64_t unused = 0;
  auto pieces = graph_pieces(g, h, false, unused);
  graph_components(pieces, [&](std::int64_t strip, const std::vector<const GraphPiece*>& group) {
    FiberComponent c;
    c.strip_index = strip;
    double lo = group.front()->h_min;
    double hi = group.front()->h_max;
    c.s_lo = static_cast<double>(group.front()->span.edge) + group.front()->span.tau_lo;
    c.s_hi = c.s_lo;
    for (const GraphPiece* piece : group) {
      lo = std::min(lo, piece->h_min);
      hi = std::max(hi, piece->h_max);
      const double edge = static_cast<double>(piece->span.edge);
      c.s_lo = std::min(c.s_lo, edge + piece->span.tau_lo);
      c.s_hi = std::max(c.s_hi, edge + piece->span.tau_hi);
      c.edges.push_back(piece->span);
    }
    c.extent = p.mu * (hi - lo);
    if (c.extent > tol.degenerate_extent) out.components.push_back(std::move(c));
  });
  finish(out);
  return out;
}

namespace {

detail::ExtentAccumulator path_accumulator(const PolyPath& path, const StripParams& p, const Tolerances& tol,
                                           int keep) {
  require_valid(p);
  const auto h = strip_coordinate(path.vertices(), p);
  require_finite(h);
  detail::ExtentAccumulator acc(p.mu, keep);
  auto close = [&](const Run& run) {
    const double extent = p.mu * (run.h_max - run.h_min);
    if (extent > tol.degenerate_extent) acc.add(extent);
  };
  RunTracker tracker(close);
  auto piece = [&](double sa, double sb, double ha, double hb) { tracker.piece(sa, sb, ha, hb); };
  const bool full_counts = p.mu > tol.degenerate_extent;
  auto bulk = [&](std::int64_t count) {
    tracker.close_all();
    if (full_counts) acc.add_full(count);
  };
  for (Eigen::Index i = 0; i + 1 < path.size(); ++i)
    subdivide(path.param(i), path.param(i + 1), h(i), h(i + 1), true, piece, bulk);
  tracker.close_all();
  return acc;
}

detail::ExtentAccumulator graph_accumulator(const PLGraphMap& g, const StripParams& p, const Tolerances& tol,
                                            int keep) {
  require_valid(p);
  const auto h = strip_coordinate(g.positions(), p);
  require_finite(h);
  detail::ExtentAccumulator acc(p.mu, keep);
  std::int64_t full = 0;
  auto pieces = graph_pieces(g, h, true, full);
  if (p.mu > tol.degenerate_extent) acc.add_full(full);
  graph_components(pieces, [&](std::int64_t, const std::vector<const GraphPiece*>& group) {
    double lo = group.front()->h_min;
    double hi = group.front()->h_max;
    for (const GraphPiece* piece : group) {
      lo = std::min(lo, piece->h_min);
      hi = std::max(hi, piece->h_max);
    }
    const double extent = p.mu * (hi - lo);
    if (extent > tol.degenerate_extent) acc.add(extent);
  });
  return acc;
}

}  // namespace

template <typename Real>
Real fiber_length(const PolyPath& path, const StripParams& p, const Tolerances& tol) {
  return path_accumulator(path, p, tol, kSumTerms<Real>).template value<Real>();
}

template <typename Real>
Real fiber_length(const PLGraphMap& g, const StripParams& p, const Tolerances& tol) {
  return graph_accumulator(g, p, tol, kSumTerms<Real>).template value<Real>();
}

double fiber_deficit(const PolyPath& path, const StripParams& p, const Tolerances& tol) {
  return path_accumulator(path, p, tol, kSumTerms<double>).deficit();
}

double fiber_deficit(const PLGraphMap& g, const StripParams& p, const Tolerances& tol) {
  return graph_accumulator(g, p, tol, kSumTerms<double>).deficit();
}

namespace detail {

void prefix_fiber_lengths(const PolyPath& path, const StripParams& p, std::span<const double> grid,
                          const Tolerances& tol, double* out) {
  require_valid(p);
  const auto h = strip_coordinate(path.vertices(), p);
  require_finite(h);
  ExtentAccumulator acc(p.mu, kSumTerms<double>);
  auto close = [&](const Run& run) {
    const double extent = p.mu * (run.h_max - run.h_min);
    if (extent > tol.degenerate_extent) acc.add(extent);
  };
  RunTracker tracker(close);
  auto piece = [&](double sa, double sb, double ha, double hb) { tracker.piece(sa, sb, ha, hb); };
  const bool full_counts = p.mu > tol.degenerate_extent;
  auto bulk = [&](std::int64_t count) {
    tracker.close_all();
    if (full_counts) acc.add_full(count);
  };
  auto record = [&] {
    double open[2] = {0.0, 0.0};
    for (int k = 0; k < tracker.active(); ++k) {
      const double extent = p.mu * (tracker.run(k).h_max - tracker.run(k).h_min);
      if (extent > tol.degenerate_extent) open[k] = extent;
    }
    return acc.value<double>(open[0], open[1]);
  };

  std::size_t g = 0;
  const std::size_t count = grid.size();
  while (g < count && grid[g] <= path.param(0)) out[g++] = 0.0;
  for (Eigen::Index i = 0; i + 1 < path.size() && g < count; ++i) {
    const double s0 = path.param(i);
    const double s1 = path.param(i + 1);
    const double h0 = h(i);
    const double h1 = h(i + 1);
    double s_prev = s0;
    double h_prev = h0;
    while (g < count && grid[g] <= s1) {
      const double s = grid[g];
      double hs = h1;
      if (s < s1) hs = std::clamp(h0 + (s - s0) / (s1 - s0) * (h1 - h0), std::min(h0, h1), std::max(h0, h1));
      if (s > s_prev) {
        subdivide(s_prev, s, h_prev, hs, true, piece, bulk);
        s_prev = s;
        h_prev = hs;
      }
      out[g++] = record();
    }
    if (s1 > s_prev) subdivide(s_prev, s1, h_prev, h1, true, piece, bulk);
  }
  while (g < count) out[g++] = record();
}

}  // namespace detail

template double fiber_length<double>(const PolyPath&, const StripParams&, const Tolerances&);
template quad fiber_length<quad>(const PolyPath&, const StripParams&, const Tolerances&);
template double fiber_length<double>(const PLGraphMap&, const StripParams&, const Tolerances&);
template quad fiber_length<quad>(const PLGraphMap&, const StripParams&, const Tolerances&);

}  // namespace plen
