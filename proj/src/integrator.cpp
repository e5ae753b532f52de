#include "plen/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace plen {

std::string_view to_string(Method m) {
  return m == Method::monte_carlo ? "monte_carlo" : "jittered_grid";
}

Method method_from_string(std::string_view name) {
  if (name == "monte_carlo") return Method::monte_carlo;
  if (name == "jittered_grid") return Method::jittered_grid;
  throw std::invalid_argument("unknown method: " + std::string(name));
}

namespace {

// 53 random bits in [0, 1); platform independent unlike uniform_real_distribution.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Runs fn(i) for i in [0, n) on all hardware threads. Results must be written
// to per-index slots; reductions are done by the caller in index order.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t end = std::min(n, (w + 1) * chunk);
      for (std::size_t i = w * chunk; i < end; ++i) fn(i);
    });
  }
}

template <typename Real>
Real fiber_value(const Curve& c, const StripParams& p, const Tolerances& tol) {
  return std::visit([&](const auto& obj) { return fiber_length<Real>(obj, p, tol); }, c);
}

bool is_constant(const Curve& c) {
  return std::visit(
      [](const auto& obj) {
        if constexpr (std::is_same_v<std::decay_t<decltype(obj)>, PolyPath>) {
          return obj.is_constant();
        } else {
          return diameter(obj) == 0.0;
        }
      },
      c);
}

template <typename Real>
BasicLengthEstimate<Real> summarize(const std::vector<Real>& values, const SampleBudget& budget, Method method) {
  BasicLengthEstimate<Real> est;
  est.samples = static_cast<std::int64_t>(values.size());
  est.seed = budget.seed;
  est.method = method;
  Real sum = 0;
  for (const Real& v : values) sum += v;
  est.value = sum / Real(values.size());
  if (method == Method::monte_carlo && values.size() > 1) {
    Real sq = 0;
    for (const Real& v : values) {
      const Real d = v - est.value;
      sq += d * d;
    }
    const double var = static_cast<double>(sq) / static_cast<double>(values.size() - 1);
    est.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return est;
}

}  // namespace

std::vector<StripParams> draw_samples(const SampleBudget& budget, Method method) {
  if (budget.n <= 0) throw std::invalid_argument("sample budget must be positive");
  std::mt19937_64 rng(budget.seed);
  std::vector<StripParams> out;
  if (method == Method::monte_carlo) {
    out.resize(static_cast<std::size_t>(budget.n));
    for (auto& p : out) {
      p.x = unit_uniform(rng);
      p.t = unit_uniform(rng);
      p.mu = 1.0 - unit_uniform(rng);
    }
    return out;
  }
  const std::int64_t n = budget.n;
  if (n > 1000) throw std::invalid_argument("jittered grid resolution too large");
  const double inv = 1.0 / static_cast<double>(n);
  out.reserve(static_cast<std::size_t>(n * n * n));
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j)
      for (std::int64_t k = 0; k < n; ++k) {
        StripParams p;
        p.x = (static_cast<double>(i) + unit_uniform(rng)) * inv;
        p.t = (static_cast<double>(j) + unit_uniform(rng)) * inv;
        p.mu = std::min(1.0, (static_cast<double>(k + 1) - unit_uniform(rng)) * inv);
        out.push_back(p);
      }
  return out;
}

std::vector<LengthEstimate> estimate_deficits_coupled(std::span<const Curve> inputs, const SampleBudget& budget,
                                                      Method method, const Tolerances& tol) {
  if (inputs.empty()) throw std::invalid_argument("estimate_deficits_coupled: no inputs");
  const auto samples = draw_samples(budget, method);
  std::vector<std::vector<double>> values(inputs.size(), std::vector<double>(samples.size()));
  std::vector<bool> constant(inputs.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) constant[k] = is_constant(inputs[k]);
  parallel_for(samples.size(), [&](std::size_t i) {
    for (std::size_t k = 0; k < inputs.size(); ++k)
      values[k][i] = constant[k] ? 2.0 * samples[i].mu
                                 : std::visit([&](const auto& obj) { return fiber_deficit(obj, samples[i], tol); },
                                              inputs[k]);
  });
  std::vector<LengthEstimate> out;
  out.reserve(inputs.size());
  for (const auto& v : values) out.push_back(summarize(v, budget, method));
  return out;
}

template <typename Real>
std::vector<BasicLengthEstimate<Real>> estimate_lengths_coupled(std::span<const Curve> inputs,
                                                                const SampleBudget& budget, Method method,
                                                                const Tolerances& tol) {
  if (inputs.empty()) throw std::invalid_argument("estimate_lengths_coupled: no inputs");
  const auto samples = draw_samples(budget, method);
  std::vector<std::vector<Real>> values(inputs.size(), std::vector<Real>(samples.size()));
  std::vector<bool> constant(inputs.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) constant[k] = is_constant(inputs[k]);
  parallel_for(samples.size(), [&](std::size_t i) {
    for (std::size_t k = 0; k < inputs.size(); ++k)
      values[k][i] = constant[k] ? Real(0) : fiber_value<Real>(inputs[k], samples[i], tol);
  });
  std::vector<BasicLengthEstimate<Real>> out;
  out.reserve(inputs.size());
  for (const auto& v : values) out.push_back(summarize(v, budget, method));
  return out;
}

template <typename Real>
BasicLengthEstimate<Real> estimate_length(const Curve& input, const SampleBudget& budget, Method method,
                                          const Tolerances& tol) {
  return estimate_lengths_coupled<Real>(std::span<const Curve>(&input, 1), budget, method, tol).front();
}

template std::vector<BasicLengthEstimate<double>> estimate_lengths_coupled<double>(std::span<const Curve>,
                                                                                   const SampleBudget&, Method,
                                                                                   const Tolerances&);
template std::vector<BasicLengthEstimate<quad>> estimate_lengths_coupled<quad>(std::span<const Curve>,
                                                                               const SampleBudget&, Method,
                                                                               const Tolerances&);
template BasicLengthEstimate<double> estimate_length<double>(const Curve&, const SampleBudget&, Method,
                                                             const Tolerances&);
template BasicLengthEstimate<quad> estimate_length<quad>(const Curve&, const SampleBudget&, Method,
                                                         const Tolerances&);

PairedDifference estimate_difference(const Curve& a, const Curve& b, const SampleBudget& budget, Method method,
                                     const Tolerances& tol) {
  const auto samples = draw_samples(budget, method);
  std::vector<double> diff(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    diff[i] = fiber_value<double>(a, samples[i], tol) - fiber_value<double>(b, samples[i], tol);
  });
  const auto est = summarize(diff, budget, method);
  return {est.value, est.std_error, est.samples};
}

std::vector<double> cumulative_profile(const PolyPath& path, std::span<const double> s_grid,
                                       const SampleBudget& budget, Method method, const Tolerances& tol) {
  for (std::size_t g = 0; g < s_grid.size(); ++g) {
    if (!(s_grid[g] >= 0.0 && s_grid[g] <= 1.0)) throw std::invalid_argument("profile grid must lie in [0, 1]");
    if (g > 0 && s_grid[g] < s_grid[g - 1]) throw std::invalid_argument("profile grid must be sorted");
  }
  const auto samples = draw_samples(budget, method);
  const std::size_t G = s_grid.size();
  std::vector<double> per_sample(samples.size() * G, 0.0);
  if (!path.is_constant()) {
    parallel_for(samples.size(), [&](std::size_t i) {
      detail::prefix_fiber_lengths(path, samples[i], s_grid, tol, per_sample.data() + i * G);
    });
  }
  std::vector<double> profile(G, 0.0);
  for (std::size_t g = 0; g < G; ++g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) sum += per_sample[i * G + g];
    profile[g] = sum / static_cast<double>(samples.size());
  }
  return profile;
}

double segment_fiber_average(double ell) {
  if (ell <= 0.0) return 0.0;
  if (ell < 1.0) return ell - ell * ell / 8.0;
  const double n0 = std::floor(ell);
  const double theta = ell - n0;
  // f in [0, theta]: n0 full strips, partial pieces f and theta - f.
  const double part1 = (2.0 - std::ldexp(1.0, 1 - static_cast<int>(std::min(n0, 2000.0)))) * theta +
                       std::ldexp(1.0, -static_cast<int>(std::min(n0, 2000.0))) * 7.0 / 8.0 * theta * theta;
  // f in (theta, 1): n0 - 1 full strips, partial pieces f and 1 + theta - f.
  const double s = 1.0 + theta;
  const double sym = 2.0 * (s * (s / 2.0 - theta) - 0.25 * (s * s / 4.0 - theta * theta));
  const int k = static_cast<int>(std::min(n0, 2000.0)) - 1;
  const double part2 = (2.0 - std::ldexp(1.0, 1 - k)) * (1.0 - theta) + std::ldexp(1.0, -k) * sym;
  return part1 + part2;
}

double segment_length_oracle(double d, int panels) {
  if (!(d > 0.0)) throw std::invalid_argument("segment_length_oracle requires d > 0");
  static constexpr double kNodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                       0.9061798459386640};
  static constexpr double kWeights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                         0.4786286704993665, 0.2369268850561891};
  std::vector<double> t_nodes, t_weights, m_nodes, m_weights;
  auto build = [&](double lo, double hi, std::vector<double>& nodes, std::vector<double>& weights) {
    const double width = (hi - lo) / panels;
    for (int k = 0; k < panels; ++k) {
      const double mid = lo + (k + 0.5) * width;
      for (int q = 0; q < 5; ++q) {
        nodes.push_back(mid + 0.5 * width * kNodes[q]);
        weights.push_back(0.5 * width * kWeights[q]);
      }
    }
  };
  // |sin(pi t)| is symmetric about t = 1/2.
  build(0.0, 0.5, t_nodes, t_weights);
  build(0.0, 1.0, m_nodes, m_weights);
  double total = 0.0;
  for (std::size_t a = 0; a < t_nodes.size(); ++a) {
    const double proj = d * std::sin(std::numbers::pi * t_nodes[a]);
    double inner = 0.0;
    for (std::size_t b = 0; b < m_nodes.size(); ++b) {
      const double mu = m_nodes[b];
      inner += m_weights[b] * mu * segment_fiber_average(proj / mu);
    }
    total += t_weights[a] * inner;
  }
  return 2.0 * total;
}

}  // namespace plen
