#pragma once

#include "plen/fiber.hpp"
#include "plen/geometry.hpp"
#include "plen/real.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace plen {

enum class Method { monte_carlo, jittered_grid };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

/// Monte Carlo: `n` i.i.d. strip families. Jittered grid: `n` cells per axis,
/// n^3 samples in total.
struct SampleBudget {
  std::int64_t n = 100000;
  std::uint64_t seed = 42;
};

template <typename Real = double>
struct BasicLengthEstimate {
  Real value = 0;
  double std_error = 0.0;  // 0 for jittered_grid
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  Method method = Method::monte_carlo;
};
using LengthEstimate = BasicLengthEstimate<double>;

using Curve = std::variant<PolyPath, PLGraphMap>;

/// The (x, t, mu) sample set for a budget; mu is never 0. Sample generation
/// depends only on (budget, method), so every caller sees the same set.
std::vector<StripParams> draw_samples(const SampleBudget& budget, Method method);

template <typename Real = double>
BasicLengthEstimate<Real> estimate_length(const Curve& input, const SampleBudget& budget,
                                          Method method = Method::monte_carlo, const Tolerances& tol = {});

/// Common random numbers: all inputs are evaluated on the same sample set, so
/// any per-fiber inequality between inputs holds exactly between the values.
template <typename Real = double>
std::vector<BasicLengthEstimate<Real>> estimate_lengths_coupled(std::span<const Curve> inputs,
                                                                const SampleBudget& budget,
                                                                Method method = Method::monte_carlo,
                                                                const Tolerances& tol = {});

/// Coupled estimates of 1 - len as the sample mean of fiber_deficit. The mean
/// of 2 mu over (0, 1] is 1, so 1 - value estimates len, and value > 0 shows
/// len < 1 even when len is within rounding of 1.
std::vector<LengthEstimate> estimate_deficits_coupled(std::span<const Curve> inputs, const SampleBudget& budget,
                                                      Method method = Method::monte_carlo,
                                                      const Tolerances& tol = {});

/// Coupled estimate of len(a) - len(b) with the standard error of the paired differences.
struct PairedDifference {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};
PairedDifference estimate_difference(const Curve& a, const Curve& b, const SampleBudget& budget,
                                     Method method = Method::monte_carlo, const Tolerances& tol = {});

/// Coupled estimates of len(path restricted to [0, s]) for each s in the grid.
/// Nondecreasing exactly; the value at s = 1 is bitwise equal to
/// estimate_length(path).value for the same budget.
std::vector<double> cumulative_profile(const PolyPath& path, std::span<const double> s_grid,
                                       const SampleBudget& budget, Method method = Method::monte_carlo,
                                       const Tolerances& tol = {});

/// Average of L^{x,t,mu} / mu over x in [0,1] for a straight segment whose
/// strip-normal extent is `ell` strip widths. Closed form.
double segment_fiber_average(double ell);

/// len of a straight segment of Euclidean length d, evaluated
/// deterministically: x integrated in closed form, then composite 5-point
/// Gauss-Legendre over t and mu with `panels` panels per axis
/// (5 * panels nodes per axis).
double segment_length_oracle(double d, int panels = 256);

}  // namespace plen
