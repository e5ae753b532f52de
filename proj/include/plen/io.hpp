#pragma once

#include "plen/fiber.hpp"
#include "plen/homotopy.hpp"
#include "plen/integrator.hpp"
#include "plen/reparam.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace plen {

inline constexpr const char* kToolVersion = "0.1.0";

/// Malformed or unreadable input; the CLI maps it to exit status 2.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite intermediate or result; exit status 3.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace plen

namespace plen::io {

using json = nlohmann::json;

PolyPath path_from_json(const json& j);
json to_json(const PolyPath& path);

PLGraphMap graph_from_json(const json& j);
json to_json(const PLGraphMap& g);

/// Path file ("vertices") or graph file ("nodes").
Curve curve_from_json(const json& j);

PolygonalDomain domain_from_json(const json& j);
json to_json(const PolygonalDomain& d);

json to_json(const LengthEstimate& e);
json to_json(const FiberDecomposition& f, bool with_edges = false);
json to_json(const HomotopySignature& s);
json to_json(const GeodesicResult& r);
json to_json(const EquicontinuityReport& r);
json to_json(const StandardRepresentation& r);

json parse(const std::string& text);
json read_file(const std::string& path);
/// Canonical text: sorted keys, two-space indent, shortest round-trip floats, trailing newline.
std::string dump(const json& j);
void write_file(const std::string& path, const std::string& text);

struct RenderScene {
  std::optional<PolygonalDomain> domain;
  std::vector<PolyPath> paths;
  std::optional<StripParams> strips;
};

/// SVG 1.1 document; y axis points up in plane coordinates.
std::string render_svg(const RenderScene& scene);

}  // namespace plen::io
