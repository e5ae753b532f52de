#include "plen/acceptance.hpp"

#include "plen/curves.hpp"
#include "plen/fiber.hpp"
#include "plen/homotopy.hpp"
#include "plen/integrator.hpp"
#include "plen/io.hpp"
#include "plen/reparam.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

namespace plen {

namespace {

using json = nlohmann::json;

// len of the unit segment, from segment_length_oracle(1, 2048).
constexpr double kUnitSegmentLength = 0.435579213044759;

struct Context {
  SuiteMode mode;
  std::uint64_t seed;
  // Largest value - 3 sigma over every estimate made by the suite.
  double max_excess = -1.0;

  [[nodiscard]] bool full() const { return mode == SuiteMode::full; }
  template <typename T>
  T pick(T quick, T full_value) const {
    return full() ? full_value : quick;
  }
  void record(double value, double std_error) { max_excess = std::max(max_excess, value - 3.0 * std_error); }
  void record(const LengthEstimate& e) { record(e.value, e.std_error); }
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::mt19937_64 gen_;
};

PolyPath random_path(Rng& rng, int max_vertices, double half_width) {
  const int n = rng.integer(2, max_vertices);
  PointMatrix v(2, n);
  for (int k = 0; k < n; ++k) v.col(k) = Point(rng.uniform(-half_width, half_width), rng.uniform(-half_width, half_width));
  return PolyPath(std::move(v));
}

StripParams random_params(Rng& rng) { return {rng.uniform(), rng.uniform(), 1.0 - rng.uniform()}; }

std::vector<double> sorted_splits(Rng& rng, int pieces) {
  std::vector<double> c{0.0, 1.0};
  for (int k = 1; k < pieces; ++k) c.push_back(rng.uniform(0.001, 0.999));
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

// ---------------------------------------------------------------------------

CriterionResult fiber_exactness(Context& ctx) {
  const int cases = ctx.pick(300, 1000);
  const double tol = 1e-9;
  Rng rng(ctx.seed ^ 0x1001);
  int bound = 0, monotone = 0, subadd = 0, reindex = 0, period_x = 0, period_t = 0, order = 0;
  double worst = 0.0;
  auto check = [&](int& counter, double excess) {
    worst = std::max(worst, excess);
    if (excess > tol) ++counter;
  };
  for (int c = 0; c < cases; ++c) {
    const PolyPath path = random_path(rng, 50, 2.0);
    const StripParams p = random_params(rng);
    const auto dec = decompose_path(path, p);
    const double value = fiber_length(path, p);
    bool sorted = dec.value == value;
    for (std::size_t k = 0; k + 1 < dec.components.size(); ++k)
      sorted = sorted && dec.components[k].extent >= dec.components[k + 1].extent;
    if (!sorted) ++order;
    check(bound, std::max(-value, value - 2.0 * p.mu));

    const double s1 = rng.uniform();
    const double s2 = rng.uniform();
    check(monotone, fiber_length(restrict(path, std::min(s1, s2), std::max(s1, s2)), p) - value);

    const auto cuts = sorted_splits(rng, rng.integer(2, 5));
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) sum += fiber_length(restrict(path, cuts[k], cuts[k + 1]), p);
    check(subadd, value - sum);

    const int shift = rng.integer(-3, 3);
    RigidMotion move;
    move.translation = static_cast<double>(shift) * p.mu * strip_normal(p.t);
    check(reindex, std::abs(fiber_length(apply_isometry(path, move), p) - value));

    check(period_x, std::abs(fiber_length(path, {p.x + 1.0, p.t, p.mu}) - value));
    check(period_t, std::abs(fiber_length(path, {p.x, p.t + 1.0, p.mu}) - fiber_length(path, {1.0 - p.x, p.t, p.mu})));
  }
  CriterionResult r{1, "fiber exactness suite", false, {}};
  r.metrics = {{"cases", cases},           {"tolerance", tol},     {"bound_violations", bound},
               {"restriction_violations", monotone}, {"subadditivity_violations", subadd},
               {"reindexing_violations", reindex},   {"x_period_violations", period_x},
               {"t_period_violations", period_t},    {"order_violations", order},
               {"max_excess", worst}};
  r.passed = bound + monotone + subadd + reindex + period_x + period_t + order == 0;
  return r;
}

CriterionResult oracle_agreement(Context& ctx) {
  const double oracle = segment_length_oracle(1.0);
  const auto est = estimate_length(Curve(curves::segment({0.0, 0.0}, {0.0, 1.0})), {100000, ctx.seed});
  ctx.record(est);
  const double gap = std::abs(est.value - kUnitSegmentLength);
  CriterionResult r{2, "oracle agreement", false, {}};
  r.metrics = {{"oracle", oracle},         {"frozen_oracle", kUnitSegmentLength}, {"estimate", est.value},
               {"std_error", est.std_error}, {"gap", gap},                        {"samples", est.samples}};
  r.passed = std::abs(oracle - kUnitSegmentLength) <= 1e-9 && gap <= 3.0 * est.std_error && est.std_error <= 0.003;
  return r;
}

CriterionResult bounds_and_limits(Context& ctx) {
  const double ds[] = {1.0, 10.0, 100.0, 1e3, 1e4};
  json oracle = json::array();
  bool increasing = true;
  double prev = 0.0;
  for (const double d : ds) {
    const double v = segment_length_oracle(d);
    oracle.push_back(v);
    increasing = increasing && v > prev && v < 1.0;
    prev = v;
  }
  const double far = segment_length_oracle(1e6);
  const bool limit = far >= 0.99 && far < 1.0 && far > prev;

  std::vector<Curve> loops;
  for (int m = 1; m <= 64; m *= 2) loops.emplace_back(curves::circle_loop(m));
  const SampleBudget budget{ctx.pick<std::int64_t>(5000, 20000), ctx.seed};
  const auto est = estimate_lengths_coupled<quad>(loops, budget);
  // 1 - len per loop, on the same samples; positive means len < 1.
  const auto deficit = estimate_deficits_coupled(loops, budget);
  bool loops_ok = true;
  json values = json::array();
  json deficits = json::array();
  for (std::size_t k = 0; k < est.size(); ++k) {
    ctx.record(static_cast<double>(est[k].value), est[k].std_error);
    values.push_back(static_cast<double>(est[k].value));
    deficits.push_back(deficit[k].value);
    loops_ok = loops_ok && deficit[k].value > 0.0;
    if (k > 0) loops_ok = loops_ok && est[k].value > est[k - 1].value && deficit[k].value < deficit[k - 1].value;
  }
  CriterionResult r{3, "global bound and limits", false, {}};
  r.metrics = {{"oracle_d", ds},
               {"oracle_values", oracle},
               {"oracle_1e6", far},
               {"circle_values", values},
               {"circle_deficits", deficits},
               {"max_value_minus_3sigma", ctx.max_excess}};
  r.passed = increasing && limit && loops_ok && ctx.max_excess < 1.0;
  return r;
}

CriterionResult diameter_sandwich(Context& ctx) {
  const int paths = 200;
  Rng rng(ctx.seed ^ 0x4004);
  const SampleBudget budget{ctx.pick<std::int64_t>(4000, 20000), ctx.seed};
  int violations = 0;
  double min_ratio = 1e300, max_ratio = 0.0;
  for (int c = 0; c < paths; ++c) {
    PolyPath raw = random_path(rng, 20, 1.0);
    while (raw.is_constant()) raw = random_path(rng, 20, 1.0);
    const double target = rng.uniform(0.01, 0.5);
    PointMatrix v = raw.vertices() * (target / diameter(raw));
    const PolyPath path(raw.params(), std::move(v));
    const double diam = diameter(path);
    const auto e = estimate_length(Curve(path), budget);
    ctx.record(e);
    if (e.value < diam / (2.0 * std::numbers::pi) - 3.0 * e.std_error || e.value > 2.0 * diam + 3.0 * e.std_error)
      ++violations;
    min_ratio = std::min(min_ratio, e.value / diam);
    max_ratio = std::max(max_ratio, e.value / diam);
  }
  CriterionResult r{4, "diameter sandwich", false, {}};
  r.metrics = {{"paths", paths}, {"samples", budget.n}, {"violations", violations},
               {"min_len_over_diam", min_ratio}, {"max_len_over_diam", max_ratio}};
  r.passed = violations == 0;
  return r;
}

CriterionResult coupled_monotonicity(Context& ctx) {
  const int cases = 200;
  Rng rng(ctx.seed ^ 0x5005);
  const SampleBudget budget{ctx.pick<std::int64_t>(500, 2000), ctx.seed};
  int restriction = 0, split = 0;
  for (int c = 0; c < cases; ++c) {
    const PolyPath path = random_path(rng, 30, 2.0);
    if (c % 2 == 0) {
      const double s1 = rng.uniform(0.0, 0.5);
      const double s2 = rng.uniform(0.5, 1.0);
      const std::vector<Curve> in{path, restrict(path, s1, s2)};
      const auto e = estimate_lengths_coupled(std::span<const Curve>(in), budget);
      for (const auto& x : e) ctx.record(x);
      if (!(e[1].value <= e[0].value)) ++restriction;
    } else {
      const auto cuts = sorted_splits(rng, rng.integer(2, 5));
      std::vector<Curve> in{path};
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) in.emplace_back(restrict(path, cuts[k], cuts[k + 1]));
      const auto e = estimate_lengths_coupled(std::span<const Curve>(in), budget);
      double sum = 0.0;
      for (std::size_t k = 1; k < e.size(); ++k) sum += e[k].value;
      for (const auto& x : e) ctx.record(x);
      if (!(e[0].value <= sum)) ++split;
    }
  }
  CriterionResult r{5, "coupled monotonicity and subadditivity", false, {}};
  r.metrics = {{"cases", cases}, {"samples", budget.n}, {"restriction_violations", restriction},
               {"subadditivity_violations", split}};
  r.passed = restriction + split == 0;
  return r;
}

CriterionResult uniform_continuity(Context& ctx) {
  const PolyPath koch4 = curves::koch(4);
  std::vector<Curve> in{koch4};
  for (int m = 1; m <= 8; ++m) in.emplace_back(curves::perturbed(koch4, std::ldexp(1.0, -m), ctx.seed ^ 0x6006));
  const SampleBudget budget{ctx.pick<std::int64_t>(5000, 20000), ctx.seed};
  const auto e = estimate_lengths_coupled(std::span<const Curve>(in), budget);
  for (const auto& x : e) ctx.record(x);
  json deltas = json::array();
  bool monotone = true;
  double prev = 0.0;
  for (int m = 1; m <= 8; ++m) {
    const double d = std::abs(e[static_cast<std::size_t>(m)].value - e[0].value);
    deltas.push_back(d);
    if (m > 3 && d > prev) monotone = false;
    prev = d;
  }
  const PolyPath koch6 = curves::koch(6);
  const double euclid = euclidean_length(koch6);
  const auto e6 = estimate_length(Curve(koch6), budget);
  ctx.record(e6);
  CriterionResult r{6, "uniform-convergence continuity", false, {}};
  r.metrics = {{"deltas", deltas},   {"samples", budget.n},  {"koch6_euclidean_length", euclid},
               {"koch6_len", e6.value}, {"koch6_std_error", e6.std_error}};
  r.passed = monotone && prev < 0.01 && std::abs(euclid - std::pow(4.0 / 3.0, 6)) <= 1e-9 && e6.value < 1.0;
  return r;
}

CriterionResult equicontinuity_certificate(Context& ctx) {
  std::vector<PolyPath> family;
  for (int m = 1; m <= 50; ++m) family.push_back(curves::power_path(m));
  const std::vector<int> checked = ctx.full() ? [] {
    std::vector<int> all;
    for (int m = 1; m <= 50; ++m) all.push_back(m);
    return all;
  }()
                                              : std::vector<int>{1, 2, 5, 10, 20, 35, 50};
  const SampleBudget budget{ctx.pick<std::int64_t>(300, 1000), ctx.seed};
  std::vector<PolyPath> standard;
  for (const int m : checked)
    standard.push_back(standard_representation(family[static_cast<std::size_t>(m - 1)], 257, budget).path);
  json per_eps = json::array();
  int violations = 0;
  for (const double eps : {0.1, 0.2, 0.5}) {
    const auto report = equicontinuity_delta(family, eps);
    double worst = 0.0;
    for (const auto& g : standard) {
      const double w = modulus_of_continuity(g, report.delta);
      worst = std::max(worst, w);
      if (!(w < eps)) ++violations;
    }
    per_eps.push_back({{"epsilon", eps}, {"N", report.N}, {"delta", report.delta}, {"max_modulus", worst}});
  }
  CriterionResult r{7, "equicontinuity certificate", false, {}};
  r.metrics = {{"members_checked", checked.size()}, {"samples", budget.n}, {"violations", violations},
               {"per_epsilon", per_eps}};
  r.passed = violations == 0;
  return r;
}

PolyPath make_path(std::initializer_list<Point> pts) {
  PointMatrix v(2, static_cast<Eigen::Index>(pts.size()));
  Eigen::Index k = 0;
  for (const Point& p : pts) v.col(k++) = p;
  return PolyPath(std::move(v));
}

CriterionResult shortest_paths(Context& ctx) {
  const SampleBudget budget{ctx.pick<std::int64_t>(4000, 20000), ctx.seed};
  int len_violations = 0;
  auto compare_len = [&](const PolyPath& in, const PolyPath& out) {
    const std::vector<Curve> pair{in, out};
    const auto e = estimate_lengths_coupled(std::span<const Curve>(pair), budget);
    for (const auto& x : e) ctx.record(x);
    if (!(e[1].value <= e[0].value)) ++len_violations;
  };

  // (a) convex domains: the chord.
  double chord_err = 0.0;
  bool chord_ok = true;
  const std::pair<PolygonalDomain, PolyPath> convex[] = {
      {curves::square_domain(0.0, 4.0), make_path({{0.5, 0.5}, {3.5, 1.0}, {1.0, 3.5}, {3.0, 3.0}, {2.0, 0.3}, {3.6, 3.6}})},
      {curves::hexagon_domain(), make_path({{1.0, 3.0}, {3.0, 5.2}, {4.0, 1.0}, {2.0, 2.0}, {5.0, 3.5}})}};
  for (const auto& [d, in] : convex) {
    const auto res = shorten(d, in);
    const PolyPath chord = curves::segment(in.front(), in.back());
    chord_err = std::max(chord_err, hausdorff(res.polyline, chord));
    chord_ok = chord_ok && res.polyline.size() == 2 && res.taut;
    compare_len(in, res.polyline);
  }
  chord_ok = chord_ok && chord_err <= 1e-9;

  // (b) simply connected nonconvex domains: the visibility-graph geodesic.
  double oracle_err = 0.0;
  bool oracle_taut = true;
  const std::pair<PolygonalDomain, PolyPath> nonconvex[] = {
      {curves::l_domain(), make_path({{0.5, 3.5}, {1.0, 1.0}, {1.5, 0.2}, {3.0, 1.5}, {3.5, 1.0}})},
      {curves::u_domain(), make_path({{1.0, 3.5}, {0.5, 0.5}, {3.0, 0.8}, {5.5, 0.3}, {5.0, 3.5}})},
      {curves::comb_domain(), make_path({{0.5, 2.5}, {0.5, 0.5}, {2.0, 0.2}, {3.5, 0.5}, {4.0, 2.5}, {5.0, 0.5},
                                         {7.0, 0.8}, {8.5, 0.5}, {8.5, 2.5}})}};
  for (const auto& [d, in] : nonconvex) {
    const auto res = shorten(d, in);
    oracle_err = std::max(oracle_err, hausdorff(res.polyline, visibility_geodesic(d, in.front(), in.back())));
    oracle_taut = oracle_taut && res.taut;
    compare_len(in, res.polyline);
  }

  // (c) square annulus: winding loop at (1,3).
  const auto annulus = curves::square_annulus();
  const PolyPath loop_a = make_path({{1, 3}, {1, 5}, {5, 5}, {5, 1}, {1, 1}, {1, 3}});
  const PolyPath loop_b =
      make_path({{1, 3}, {0.5, 5.5}, {3, 5.2}, {5.5, 5.5}, {5.2, 3}, {5.5, 0.5}, {3, 0.8}, {0.5, 0.5}, {1, 3}});
  const auto ra = shorten(annulus, loop_a);
  const auto rb = shorten(annulus, loop_b);
  const auto again = shorten(annulus, ra.polyline);
  const double idem = hausdorff(again.polyline, ra.polyline);
  const double unique = hausdorff(ra.polyline, rb.polyline);
  const PolyPath expected = make_path({{1, 3}, {2, 4}, {4, 4}, {4, 2}, {2, 2}, {1, 3}});
  const double expected_err = hausdorff(ra.polyline, expected);
  const auto sig_in = homotopy_signature(annulus, loop_a, ra.signature.cuts);
  const auto sig_out = homotopy_signature(annulus, ra.polyline, ra.signature.cuts);
  const bool sig_ok = sig_in.word == sig_out.word && sig_in.word.size() == 1 && again.signature.word == ra.signature.word;
  compare_len(loop_a, ra.polyline);
  compare_len(loop_b, rb.polyline);

  json word = json::array();
  for (const auto& c : ra.signature.word) word.push_back(to_string(c));
  CriterionResult r{8, "shortest homotopic paths", false, {}};
  r.metrics = {{"convex_chord_error", chord_err},
               {"visibility_hausdorff", oracle_err},
               {"annulus_idempotence", idem},
               {"annulus_uniqueness", unique},
               {"annulus_expected_error", expected_err},
               {"annulus_word", word},
               {"annulus_taut", ra.taut && rb.taut},
               {"len_violations", len_violations},
               {"samples", budget.n}};
  r.passed = chord_ok && oracle_err <= 1e-6 && oracle_taut && idem <= 1e-6 && unique <= 1e-6 && sig_ok &&
             ra.taut && rb.taut && expected_err <= 1e-9 && len_violations == 0;
  return r;
}

CriterionResult determinism(Context& ctx) {
  auto run = [&] {
    const PolyPath koch = curves::koch(3);
    json out;
    out["estimate"] = io::to_json(estimate_length(Curve(koch), {2000, ctx.seed}));
    out["grid"] = io::to_json(estimate_length(Curve(koch), {8, ctx.seed}, Method::jittered_grid));
    const double grid[] = {0.0, 0.25, 0.5, 1.0};
    out["profile"] = cumulative_profile(koch, grid, {2000, ctx.seed});
    out["reparam"] = io::to_json(standard_representation(koch, 17, {300, ctx.seed}).path);
    return io::dump(out);
  };
  const std::string a = run();
  const std::string b = run();
  CriterionResult r{9, "determinism", a == b, {}};
  r.metrics = {{"bytes", a.size()}, {"identical", a == b}};
  return r;
}

}  // namespace

bool AcceptanceReport::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
}

AcceptanceReport run_acceptance(SuiteMode mode, std::uint64_t seed,
                                const std::function<void(const CriterionResult&, double)>& on_done) {
  Context ctx{mode, seed};
  AcceptanceReport report;
  report.mode = mode;
  report.seed = seed;
  // Criterion 3 checks the global bound over every estimate, so it runs after the others.
  using Fn = CriterionResult (*)(Context&);
  const Fn order[] = {fiber_exactness,       oracle_agreement,           diameter_sandwich,
                      coupled_monotonicity,  uniform_continuity,         equicontinuity_certificate,
                      shortest_paths,        bounds_and_limits,          determinism};
  for (const Fn fn : order) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = fn(ctx);
    } catch (const std::exception& e) {
      r.passed = false;
      r.metrics = {{"error", e.what()}};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_done) on_done(r, seconds);
    report.criteria.push_back(std::move(r));
  }
  std::sort(report.criteria.begin(), report.criteria.end(),
            [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
  return report;
}

nlohmann::json to_json(const AcceptanceReport& report) {
  json criteria = json::array();
  for (const auto& c : report.criteria)
    criteria.push_back({{"id", c.id}, {"metrics", c.metrics}, {"name", c.name}, {"passed", c.passed}});
  return {{"criteria", criteria},
          {"mode", report.mode == SuiteMode::full ? "full" : "quick"},
          {"passed", report.passed()},
          {"seed", report.seed},
          {"tool_version", kToolVersion}};
}

}  // namespace plen
