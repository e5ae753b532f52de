#include "plen/acceptance.hpp"
#include "plen/fiber.hpp"
#include "plen/homotopy.hpp"
#include "plen/integrator.hpp"
#include "plen/io.hpp"
#include "plen/reparam.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

namespace {

using plen::io::json;

struct Globals {
  std::uint64_t seed = 42;
  std::int64_t samples = 100000;
  std::string method = "monte_carlo";
  double tol = 1e-9;
  std::string output;
};

enum Exit { kOk = 0, kSelftestFailed = 1, kInput = 2, kNumeric = 3, kMaxIter = 4 };

void emit(const Globals& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
  } else {
    plen::io::write_file(g.output, text);
  }
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw plen::numeric_error(std::string(what) + " is not finite");
}

plen::SampleBudget budget(const Globals& g) { return {g.samples, g.seed}; }

plen::PolyPath read_path(const std::string& file) { return plen::io::path_from_json(plen::io::read_file(file)); }

plen::StripParams parse_strips(const std::string& text) {
  std::stringstream in(text);
  std::string item;
  std::vector<double> v;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw plen::input_error("--strips expects x,t,mu");
    }
  }
  if (v.size() != 3) throw plen::input_error("--strips expects x,t,mu");
  plen::StripParams p{v[0], v[1], v[2]};
  plen::require_valid(p);
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strip-based path length toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", plen::kToolVersion);

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--samples", g.samples, "Sample budget")->capture_default_str();
  app.add_option("--method", g.method, "monte_carlo or jittered_grid")
      ->check(CLI::IsMember({"monte_carlo", "jittered_grid"}))
      ->capture_default_str();
  app.add_option("--tol", g.tol, "Convergence tolerance")->capture_default_str();
  app.add_option("--output", g.output, "Write the result here instead of stdout");

  std::string input;
  auto* length = app.add_subcommand("length", "Estimate len of a path or graph");
  length->add_option("input", input, "Path or graph JSON")->required();

  double fx = 0.0, ft = 0.0, fmu = 1.0;
  bool with_edges = false;
  auto* fiber = app.add_subcommand("fiber", "Strip components for one parameter triple");
  fiber->add_option("input", input, "Path or graph JSON")->required();
  fiber->add_option("--x", fx)->capture_default_str();
  fiber->add_option("--t", ft)->capture_default_str();
  fiber->add_option("--mu", fmu)->capture_default_str();
  fiber->add_flag("--edges", with_edges, "List edge pieces of graph components");

  int n_out = 257;
  auto* reparam = app.add_subcommand("reparam", "Standard representation of a path");
  reparam->add_option("input", input, "Path JSON")->required();
  reparam->add_option("--n", n_out, "Output breakpoints")->capture_default_str();

  std::vector<std::string> family;
  double eps = 0.1;
  auto* equi = app.add_subcommand("equicontinuity", "Modulus delta for a family of paths");
  equi->add_option("inputs", family, "Path JSON files")->required();
  equi->add_option("--eps", eps)->capture_default_str();

  std::string domain_file;
  int max_iter = 10000;
  auto* shorten = app.add_subcommand("shorten", "Shortest homotopic path in a polygonal domain");
  shorten->add_option("domain", domain_file, "Domain JSON")->required();
  shorten->add_option("input", input, "Path JSON")->required();
  shorten->add_option("--max-iter", max_iter)->capture_default_str();

  std::vector<std::string> render_paths;
  std::string out_file, strips;
  auto* render = app.add_subcommand("render", "SVG of a domain, paths and strips");
  render->add_option("paths", render_paths, "Path JSON files");
  render->add_option("--domain", domain_file, "Domain JSON");
  render->add_option("--out", out_file, "SVG file")->required();
  render->add_option("--strips", strips, "Strip family x,t,mu");

  bool quick = false, full = false;
  auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
  auto* quick_flag = selftest->add_flag("--quick", quick);
  selftest->add_flag("--full", full)->excludes(quick_flag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    const plen::Method method = plen::method_from_string(g.method);
    if (*length) {
      const auto e = plen::estimate_length(plen::io::curve_from_json(plen::io::read_file(input)), budget(g), method);
      require_finite(e.value, "estimate");
      require_finite(e.std_error, "standard error");
      emit(g, plen::io::dump(plen::io::to_json(e)));
    } else if (*fiber) {
      const plen::StripParams p{fx, ft, fmu};
      const plen::Curve c = plen::io::curve_from_json(plen::io::read_file(input));
      const auto dec = std::holds_alternative<plen::PolyPath>(c) ? plen::decompose_path(std::get<plen::PolyPath>(c), p)
                                                                 : plen::decompose_graph(std::get<plen::PLGraphMap>(c), p);
      require_finite(dec.value, "fiber length");
      emit(g, plen::io::dump(plen::io::to_json(dec, with_edges)));
    } else if (*reparam) {
      const auto r = plen::standard_representation(read_path(input), n_out, budget(g), method);
      require_finite(r.total_length, "total length");
      emit(g, plen::io::dump(plen::io::to_json(r)));
    } else if (*equi) {
      std::vector<plen::PolyPath> paths;
      for (const auto& f : family) paths.push_back(read_path(f));
      emit(g, plen::io::dump(plen::io::to_json(plen::equicontinuity_delta(paths, eps))));
    } else if (*shorten) {
      const auto d = plen::io::domain_from_json(plen::io::read_file(domain_file));
      const auto r = plen::shorten(d, read_path(input), {g.tol, max_iter});
      emit(g, plen::io::dump(plen::io::to_json(r)));
      if (!r.taut && r.iterations >= max_iter) {
        std::cerr << "shorten: iteration limit reached\n";
        return kMaxIter;
      }
    } else if (*render) {
      plen::io::RenderScene scene;
      if (!domain_file.empty()) scene.domain = plen::io::domain_from_json(plen::io::read_file(domain_file));
      for (const auto& f : render_paths) scene.paths.push_back(read_path(f));
      if (!strips.empty()) scene.strips = parse_strips(strips);
      plen::io::write_file(out_file, plen::io::render_svg(scene));
    } else if (*selftest) {
      const auto mode = full ? plen::SuiteMode::full : plen::SuiteMode::quick;
      const auto report = plen::run_acceptance(mode, g.seed, [](const plen::CriterionResult& r, double) {
        std::cerr << (r.passed ? "PASS " : "FAIL ") << r.id << ' ' << r.name << '\n';
      });
      emit(g, plen::io::dump(plen::to_json(report)));
      return report.passed() ? kOk : kSelftestFailed;
    }
  } catch (const plen::numeric_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const plen::input_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kOk;
}
