#include "plen/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace plen::io {

namespace {

const json& member(const json& j, const char* key) {
  if (!j.is_object()) throw input_error("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw input_error(std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw input_error(std::string(what) + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw input_error(std::string(what) + ": not finite");
  return v;
}

Point point(const json& j) {
  if (!j.is_array() || j.size() != 2) throw input_error("expected a point [x, y]");
  return {number(j[0], "x"), number(j[1], "y")};
}

json point_json(const Point& p) { return json::array({p.x(), p.y()}); }

std::vector<Point> point_list(const json& j, const char* what) {
  if (!j.is_array()) throw input_error(std::string(what) + ": expected an array of points");
  std::vector<Point> out;
  out.reserve(j.size());
  for (const auto& p : j) out.push_back(point(p));
  return out;
}

json point_list_json(const std::vector<Point>& pts) {
  json out = json::array();
  for (const Point& p : pts) out.push_back(point_json(p));
  return out;
}

}  // namespace

PolyPath path_from_json(const json& j) {
  const auto pts = point_list(member(j, "vertices"), "vertices");
  if (pts.empty()) throw input_error("vertices: at least one vertex required");
  PointMatrix v(2, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) v.col(static_cast<Eigen::Index>(i)) = pts[i];
  try {
    if (!j.contains("params")) return PolyPath(std::move(v));
    const json& ps = j.at("params");
    if (!ps.is_array() || ps.size() != pts.size()) throw input_error("params: must match vertices in length");
    Eigen::VectorXd params(static_cast<Eigen::Index>(ps.size()));
    for (std::size_t i = 0; i < ps.size(); ++i) params(static_cast<Eigen::Index>(i)) = number(ps[i], "param");
    return PolyPath(std::move(params), std::move(v));
  } catch (const std::invalid_argument& e) {
    throw input_error(e.what());
  }
}

json to_json(const PolyPath& path) {
  json params = json::array();
  json vertices = json::array();
  for (Eigen::Index i = 0; i < path.size(); ++i) {
    params.push_back(path.param(i));
    vertices.push_back(point_json(path.vertex(i)));
  }
  return {{"params", params}, {"vertices", vertices}};
}

PLGraphMap graph_from_json(const json& j) {
  const json& nodes = member(j, "nodes");
  const json& edges = member(j, "edges");
  if (!nodes.is_array() || nodes.empty()) throw input_error("nodes: expected a nonempty array");
  if (!edges.is_array()) throw input_error("edges: expected an array");
  std::vector<std::string> ids;
  PointMatrix pos(2, static_cast<Eigen::Index>(nodes.size()));
  std::map<std::string, Eigen::Index> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const json& id = member(nodes[i], "id");
    if (!id.is_string()) throw input_error("node id must be a string");
    ids.push_back(id.get<std::string>());
    pos.col(static_cast<Eigen::Index>(i)) = point(member(nodes[i], "xy"));
    index[ids.back()] = static_cast<Eigen::Index>(i);
  }
  std::vector<PLGraphMap::Edge> es;
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      throw input_error("edge must be [id, id]");
    const auto a = index.find(e[0].get<std::string>());
    const auto b = index.find(e[1].get<std::string>());
    if (a == index.end() || b == index.end()) throw input_error("edge refers to an unknown node id");
    es.push_back({a->second, b->second});
  }
  try {
    return PLGraphMap(std::move(ids), std::move(pos), std::move(es));
  } catch (const std::invalid_argument& e) {
    throw input_error(e.what());
  }
}

json to_json(const PLGraphMap& g) {
  json nodes = json::array();
  for (Eigen::Index i = 0; i < g.node_count(); ++i)
    nodes.push_back({{"id", g.ids()[static_cast<std::size_t>(i)]}, {"xy", point_json(g.position(i))}});
  json edges = json::array();
  for (const auto& [a, b] : g.edges())
    edges.push_back(json::array({g.ids()[static_cast<std::size_t>(a)], g.ids()[static_cast<std::size_t>(b)]}));
  return {{"edges", edges}, {"nodes", nodes}};
}

Curve curve_from_json(const json& j) {
  if (j.is_object() && j.contains("nodes")) return graph_from_json(j);
  return path_from_json(j);
}

PolygonalDomain domain_from_json(const json& j) {
  PolygonalDomain d;
  d.outer = point_list(member(j, "outer"), "outer");
  if (j.contains("holes")) {
    const json& holes = j.at("holes");
    if (!holes.is_array()) throw input_error("holes: expected an array of polygons");
    for (const auto& h : holes) d.holes.push_back(point_list(h, "hole"));
  }
  return d;
}

json to_json(const PolygonalDomain& d) {
  json holes = json::array();
  for (const auto& h : d.holes) holes.push_back(point_list_json(h));
  return {{"holes", holes}, {"outer", point_list_json(d.outer)}};
}

json to_json(const LengthEstimate& e) {
  return {{"method", std::string(to_string(e.method))},
          {"samples", e.samples},
          {"seed", e.seed},
          {"std_error", e.std_error},
          {"tool_version", kToolVersion},
          {"value", e.value}};
}

json to_json(const FiberDecomposition& f, bool with_edges) {
  json comps = json::array();
  for (const auto& c : f.components) {
    json item = {{"extent", c.extent}, {"j", c.strip_index}, {"s_hi", c.s_hi}, {"s_lo", c.s_lo}};
    if (with_edges) {
      json edges = json::array();
      for (const auto& e : c.edges) edges.push_back({{"edge", e.edge}, {"tau_hi", e.tau_hi}, {"tau_lo", e.tau_lo}});
      item["edges"] = edges;
    }
    comps.push_back(item);
  }
  return {{"components", comps},
          {"params", {{"mu", f.params.mu}, {"t", f.params.t}, {"x", f.params.x}}},
          {"tool_version", kToolVersion},
          {"value", f.value}};
}

json to_json(const HomotopySignature& s) {
  json word = json::array();
  for (const auto& c : s.word) word.push_back(to_string(c));
  json cuts = json::array();
  for (const auto& c : s.cuts) cuts.push_back({{"from", point_json(c.from)}, {"hole", c.hole}, {"to", point_json(c.to)}});
  return {{"cuts", cuts}, {"word", word}};
}

json to_json(const GeodesicResult& r) {
  return {{"iterations", r.iterations},
          {"path", to_json(r.polyline)},
          {"signature", to_json(r.signature)},
          {"taut", r.taut},
          {"tool_version", kToolVersion}};
}

json to_json(const EquicontinuityReport& r) {
  return {{"N", r.N},
          {"delta", r.delta},
          {"epsilon", r.epsilon},
          {"family_size", r.family_size},
          {"member_counts", r.member_counts},
          {"tool_version", kToolVersion}};
}

json to_json(const StandardRepresentation& r) {
  json out = to_json(r.path);
  out["degenerate_domain"] = r.degenerate_domain;
  out["total_length"] = r.total_length;
  out["tool_version"] = kToolVersion;
  return out;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw input_error(std::string("invalid JSON: ") + e.what());
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write " + path);
  out << text;
  if (!out) throw input_error("cannot write " + path);
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

// Plane to SVG user units: y flipped.
std::string svg_point(const Point& p) { return num(p.x()) + "," + num(-p.y()); }

// Sutherland-Hodgman clip of a convex polygon to sign * (n . p - lo) >= 0.
std::vector<Point> clip(const std::vector<Point>& poly, const Point& n, double lo, double sign) {
  std::vector<Point> out;
  auto inside = [&](const Point& p) { return sign * (n.dot(p) - lo) >= 0.0; };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % poly.size()];
    const bool ia = inside(a);
    const bool ib = inside(b);
    if (ia) out.push_back(a);
    if (ia != ib) {
      const double t = (lo - n.dot(a)) / n.dot(b - a);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const RenderScene& scene) {
  double lo_x = std::numeric_limits<double>::infinity();
  double lo_y = lo_x;
  double hi_x = -lo_x;
  double hi_y = -lo_x;
  auto extend = [&](const Point& p) {
    lo_x = std::min(lo_x, p.x());
    lo_y = std::min(lo_y, p.y());
    hi_x = std::max(hi_x, p.x());
    hi_y = std::max(hi_y, p.y());
  };
  if (scene.domain) {
    for (const Point& p : scene.domain->outer) extend(p);
    for (const auto& h : scene.domain->holes)
      for (const Point& p : h) extend(p);
  }
  for (const auto& path : scene.paths)
    for (Eigen::Index i = 0; i < path.size(); ++i) extend(path.vertex(i));
  if (!std::isfinite(lo_x)) {
    lo_x = lo_y = 0.0;
    hi_x = hi_y = 1.0;
  }
  double w = hi_x - lo_x;
  double h = hi_y - lo_y;
  const double size = std::max({w, h, 1e-9});
  if (w == 0.0) w = size;
  if (h == 0.0) h = size;
  const double mx = 0.05 * w;
  const double my = 0.05 * h;
  const double vx = 0.5 * (lo_x + hi_x) - 0.5 * w - mx;
  const double vy = 0.5 * (lo_y + hi_y) - 0.5 * h - my;
  const double vw = w + 2.0 * mx;
  const double vh = h + 2.0 * my;
  const double stroke = 0.004 * std::max(vw, vh);

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << num(vx) << ' ' << num(-(vy + vh))
      << ' ' << num(vw) << ' ' << num(vh) << "\">\n";

  if (scene.strips) {
    const StripParams& p = *scene.strips;
    const std::vector<Point> view{Point(vx, vy), Point(vx + vw, vy), Point(vx + vw, vy + vh), Point(vx, vy + vh)};
    // h(z) = n . z / mu - x with n = (-sin t pi, cos t pi).
    const Point n = strip_normal(p.t);
    double h_lo = std::numeric_limits<double>::infinity();
    double h_hi = -h_lo;
    for (const Point& c : view) {
      h_lo = std::min(h_lo, strip_coordinate(c, p));
      h_hi = std::max(h_hi, strip_coordinate(c, p));
    }
    svg << "<g class=\"strips\" fill=\"#4a7bd0\" fill-opacity=\"0.15\" stroke=\"none\">\n";
    const auto j0 = static_cast<long long>(std::floor(h_lo));
    const auto j1 = static_cast<long long>(std::floor(h_hi));
    for (long long j = j0; j <= j1 && j - j0 < 100000; ++j) {
      if (j % 2 != 0) continue;
      const double a = (static_cast<double>(j) + p.x) * p.mu;
      const double b = (static_cast<double>(j) + 1.0 + p.x) * p.mu;
      auto band = clip(clip(view, n, a, 1.0), n, b, -1.0);
      if (band.size() < 3) continue;
      svg << "<polygon data-strip=\"" << j << "\" points=\"";
      for (std::size_t i = 0; i < band.size(); ++i) svg << (i ? " " : "") << svg_point(band[i]);
      svg << "\"/>\n";
    }
    svg << "</g>\n";
  }

  if (scene.domain) {
    svg << "<path class=\"domain\" fill=\"#eeeeee\" fill-rule=\"evenodd\" stroke=\"#333333\" stroke-width=\""
        << num(stroke) << "\" d=\"";
    auto ring = [&](const Polygon& poly) {
      for (std::size_t i = 0; i < poly.size(); ++i) svg << (i ? " L" : "M") << svg_point(poly[i]);
      svg << " Z";
    };
    ring(scene.domain->outer);
    for (const auto& hole : scene.domain->holes) {
      svg << ' ';
      ring(hole);
    }
    svg << "\"/>\n";
  }

  static const char* colors[] = {"#c0392b", "#27ae60", "#8e44ad", "#d35400", "#2c3e50"};
  for (std::size_t k = 0; k < scene.paths.size(); ++k) {
    const auto& path = scene.paths[k];
    svg << "<polyline class=\"path\" fill=\"none\" stroke=\"" << colors[k % 5] << "\" stroke-width=\"" << num(stroke)
        << "\" points=\"";
    for (Eigen::Index i = 0; i < path.size(); ++i) svg << (i ? " " : "") << svg_point(path.vertex(i));
    if (path.size() == 1) svg << ' ' << svg_point(path.front());
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace plen::io
