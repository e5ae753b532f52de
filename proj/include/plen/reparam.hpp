#pragma once

#include "plen/geometry.hpp"
#include "plen/integrator.hpp"

#include <cstdint>
#include <span>

namespace plen {

struct StandardRepresentation {
  PolyPath path;
  /// Set for constant input: the length domain is [0, 0] and `path` is the
  /// constant path itself.
  bool degenerate_domain = false;
  double total_length = 0.0;
  std::size_t grid_size = 0;  // profile grid points after refinement
};

/// Parameterization by len, resampled at n_out uniform parameters.
StandardRepresentation standard_representation(const PolyPath& path, int n_out, const SampleBudget& budget,
                                               Method method = Method::monte_carlo, const Tolerances& tol = {});

/// Maximum number of pairwise disjoint subintervals of [0, 1] whose images
/// have diameter >= eps. Intervals may share an endpoint. Exact up to
/// tol.float_eps in the diameter comparison.
std::int64_t disjoint_interval_count(const PolyPath& path, double eps, const Tolerances& tol = {});

/// Same packing with len(path|J) >= eps in place of the diameter test;
/// lengths are coupled estimates on the budget's sample set.
std::int64_t length_interval_count(const PolyPath& path, double eps, const SampleBudget& budget,
                                   Method method = Method::monte_carlo, const Tolerances& tol = {});

/// max over s of diam(path([s, s + delta])); delta >= 1 gives the diameter.
double modulus_of_continuity(const PolyPath& path, double delta);

struct EquicontinuityReport {
  double epsilon = 0.0;
  std::int64_t N = 0;
  double delta = 0.0;  // epsilon^2 / 2^(N+8)
  std::size_t family_size = 0;
  std::vector<std::int64_t> member_counts;  // disjoint_interval_count at eps/16, in input order
};

EquicontinuityReport equicontinuity_delta(std::span<const PolyPath> family, double eps, const Tolerances& tol = {});

}  // namespace plen
