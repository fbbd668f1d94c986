#include "steklab/io.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "steklab/error.hpp"

namespace steklab {

namespace {

std::string point_line(const char* prefix, const Vec3& p) {
  return fmt::format("{}{:.17g} {:.17g} {:.17g}\n", prefix, p.x(), p.y(), p.z());
}

// Next non-comment, non-blank line of an OFF stream.
bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

void write_off(std::ostream& out, const TriangleMesh& mesh) {
  out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.triangle_count() << " 0\n";
  for (const auto& v : mesh.vertices) out << point_line("", v);
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void write_obj(std::ostream& out, const TriangleMesh& mesh) {
  for (const auto& v : mesh.vertices) out << point_line("v ", v);
  for (const auto& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

TriangleMesh read_off(std::istream& in) {
  std::string line;
  if (!next_line(in, line) || line.rfind("OFF", 0) != 0) throw MeshError("read_off: missing OFF header");
  int nv = 0;
  int nf = 0;
  if (!next_line(in, line) || !(std::istringstream(line) >> nv >> nf) || nv < 0 || nf < 0) {
    throw MeshError("read_off: bad element counts");
  }
  TriangleMesh mesh;
  mesh.vertices.reserve(nv);
  for (int i = 0; i < nv; ++i) {
    Vec3 p;
    if (!next_line(in, line) || !(std::istringstream(line) >> p.x() >> p.y() >> p.z())) {
      throw MeshError(fmt::format("read_off: bad vertex line {}", i));
    }
    mesh.vertices.push_back(p);
  }
  for (int i = 0; i < nf; ++i) {
    int k = 0;
    Triangle t{};
    std::istringstream row;
    if (next_line(in, line)) row.str(line);
    if (!(row >> k >> t[0] >> t[1] >> t[2]) || k != 3) throw MeshError(fmt::format("read_off: face {} is not a triangle", i));
    for (int v : t) {
      if (v < 0 || v >= nv) throw MeshError(fmt::format("read_off: face {} references vertex {}", i, v));
    }
    mesh.triangles.push_back(t);
  }
  mesh.plane_tags.assign(nv, 0);
  mesh.boundary_loops = boundary_loops(mesh);
  return mesh;
}

void write_vertex_scalars(std::ostream& out, const Eigen::VectorXd& values) {
  for (Eigen::Index i = 0; i < values.size(); ++i) out << format_double(values[i]) << '\n';
}

std::string fundamental_domain_sidecar(const FundamentalDomain& domain) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  std::map<ArcLabel, int> seen;
  for (const auto& arc : domain.arcs) {
    const int n = ++seen[arc.label];
    std::string key(to_string(arc.label));
    if (n > 1) key += fmt::format("_{}", n);
    j[key] = arc.vertices;
  }
  return j.dump();
}

std::string nodal_report_json(const NodalDecomposition& decomposition, const std::vector<NodalLineReport>& lines) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["domain_count"] = decomposition.domain_count;
  auto polylines = nlohmann::ordered_json::array();
  auto endpoints = nlohmann::ordered_json::array();
  for (const auto& r : lines) {
    auto pts = nlohmann::ordered_json::array();
    for (const auto& p : r.line.points) pts.push_back({p.position.x(), p.position.y(), p.position.z()});
    polylines.push_back(std::move(pts));
    if (r.coincident) {
      const std::string tag = fmt::format("coincident:{}", to_string(*r.coincident));
      endpoints.push_back({tag, tag});
    } else {
      endpoints.push_back({r.endpoints[0].to_string(), r.endpoints[1].to_string()});
    }
  }
  j["polylines"] = std::move(polylines);
  j["endpoints"] = std::move(endpoints);
  return j.dump();
}

}  // namespace steklab
