#pragma once

#include "plen/geometry.hpp"
#include "plen/real.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace plen {

/// Part of a graph edge, as parameters along the edge from its first node.
struct EdgeSpan {
  std::size_t edge = 0;
  double tau_lo = 0.0;
  double tau_hi = 0.0;
};

/// One connected piece of the preimage of a closed strip.
///
/// For paths [s_lo, s_hi] is the parameter interval. For graphs s_lo/s_hi are
/// the smallest and largest graph coordinates edge + tau over `edges`; they
/// only serve as a deterministic tie-break.
struct FiberComponent {
  std::int64_t strip_index = 0;
  double s_lo = 0.0;
  double s_hi = 0.0;
  double extent = 0.0;  // plane units, 0 < extent <= mu
  std::vector<EdgeSpan> edges;
};

struct FiberDecomposition {
  StripParams params;
  std::vector<FiberComponent> components;  // extent descending, then (strip_index, s_lo)
  double value = 0.0;
};

/// Components of h^{-1}([j, j+1]) for all j, with h = strip_coordinate o path.
FiberDecomposition decompose_path(const PolyPath& path, const StripParams& p, const Tolerances& tol = {});
FiberDecomposition decompose_graph(const PLGraphMap& g, const StripParams& p, const Tolerances& tol = {});

/// sum_n extent_n / 2^n of a descending sequence, accumulated in rank order.
template <typename Real = double>
Real weighted_sum(std::span<const double> sorted_extents);

/// L^{x,t,mu}; equal to decompose_*(...).value but without materializing
/// the components. Cost is linear in the vertex count for every mu.
template <typename Real = double>
Real fiber_length(const PolyPath& path, const StripParams& p, const Tolerances& tol = {});
template <typename Real = double>
Real fiber_length(const PLGraphMap& g, const StripParams& p, const Tolerances& tol = {});

/// 2 mu - L^{x,t,mu}, evaluated as a sum of nonnegative terms so that it keeps
/// full relative precision when L is within rounding of its bound. Components
/// past rank kSumTerms<double> among the partial-width ones are dropped.
double fiber_deficit(const PolyPath& path, const StripParams& p, const Tolerances& tol = {});
double fiber_deficit(const PLGraphMap& g, const StripParams& p, const Tolerances& tol = {});

namespace detail {

/// Closed-component multiset kept as a count of full-width components plus
/// the largest partial extents, enough to evaluate `weighted_sum` exactly.
class ExtentAccumulator {
 public:
  ExtentAccumulator(double mu, int keep) : mu_(mu), keep_(keep) {}

  void add_full(std::int64_t count) { full_ += count; }
  void add(double extent);

  /// Weighted sum over the stored multiset plus up to two extra extents.
  template <typename Real>
  Real value(double extra0 = 0.0, double extra1 = 0.0) const;
  /// 2 mu minus the weighted sum, without cancellation.
  [[nodiscard]] double deficit() const;

  [[nodiscard]] std::int64_t full_count() const { return full_; }
  [[nodiscard]] const std::vector<double>& partials() const { return partial_; }

 private:
  double mu_;
  int keep_;
  std::int64_t full_ = 0;
  std::vector<double> partial_;  // descending, at most keep_ entries
};

/// Fiber values of path|[0, s_g] for every s_g in the sorted grid, in one
/// pass along the path. out[g] at s_g = 1 equals fiber_length(path, p).
void prefix_fiber_lengths(const PolyPath& path, const StripParams& p, std::span<const double> grid,
                          const Tolerances& tol, double* out);

}  // namespace detail

}  // namespace plen
