#include "steklab/nodal.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <fmt/format.h>

#include "steklab/error.hpp"

namespace steklab {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

using PointKey = std::pair<int, int>;

PointKey key_of(const NodalPoint& p) { return {p.a, p.b}; }

NodalPoint vertex_point(const TriangleMesh& mesh, int v) { return {v, -1, 0.0, mesh.vertices[v]}; }

NodalPoint edge_point(const TriangleMesh& mesh, const Eigen::VectorXd& values, int i, int j) {
  const int a = std::min(i, j);
  const int b = std::max(i, j);
  const double t = values[a] / (values[a] - values[b]);
  return {a, b, t, (1.0 - t) * mesh.vertices[a] + t * mesh.vertices[b]};
}

std::pair<PointKey, PointKey> segment_key(const NodalSegment& s) {
  auto a = key_of(s.p);
  auto b = key_of(s.q);
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

std::uint64_t edge_id(int a, int b) {
  return (static_cast<std::uint64_t>(std::min(a, b)) << 32U) | static_cast<std::uint64_t>(std::max(a, b));
}

}  // namespace

std::vector<NodalPolyline> chain_segments(std::span<const NodalSegment> segments) {
  std::map<PointKey, std::vector<int>> incident;
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    incident[key_of(segments[s].p)].push_back(s);
    incident[key_of(segments[s].q)].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);
  std::vector<NodalPolyline> lines;

  auto walk = [&](const NodalPoint& start, int first) {
    NodalPolyline line;
    line.points.push_back(start);
    NodalPoint at = start;
    int seg = first;
    while (seg >= 0) {
      used[seg] = true;
      const NodalSegment& s = segments[seg];
      at = key_of(s.p) == key_of(at) ? s.q : s.p;
      line.points.push_back(at);
      const auto& around = incident[key_of(at)];
      seg = -1;
      if (around.size() == 2) {
        for (int cand : around) {
          if (!used[cand]) seg = cand;
        }
      }
    }
    line.closed = line.points.size() > 2 && line.points.front() == line.points.back();
    if (line.closed) line.points.pop_back();
    return line;
  };

  // Open chains start at endpoints and junctions.
  for (const auto& [key, segs] : incident) {
    if (segs.size() == 2) continue;
    for (int s : segs) {
      if (used[s]) continue;
      const NodalPoint& start = key_of(segments[s].p) == key ? segments[s].p : segments[s].q;
      lines.push_back(walk(start, s));
    }
  }
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    if (!used[s]) lines.push_back(walk(segments[s].p, s));
  }
  return lines;
}

NodalDecomposition nodal_domains(const TriangleMesh& mesh, const Eigen::VectorXd& u, double tau) {
  if (u.size() != mesh.vertex_count()) {
    throw DomainError(fmt::format("nodal_domains: {} values for {} vertices", u.size(), mesh.vertex_count()));
  }
  if (!(tau >= 0.0)) throw DomainError("nodal_domains: tau must be non-negative");
  const double peak = u.size() > 0 ? u.cwiseAbs().maxCoeff() : 0.0;
  NodalDecomposition out;
  out.threshold = tau * peak;

  Eigen::VectorXd values = u;
  out.signs.resize(u.size());
  bool any_signed = false;
  for (Eigen::Index v = 0; v < u.size(); ++v) {
    if (peak == 0.0 || std::abs(u[v]) <= out.threshold) {
      out.signs[v] = Sign::Zero;
      values[v] = 0.0;
    } else {
      out.signs[v] = u[v] > 0.0 ? Sign::Positive : Sign::Negative;
      any_signed = true;
    }
  }
  if (!any_signed) throw DomainError("nodal_domains: every vertex is below the zero threshold");

  UnionFind uf(u.size());
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      if (out.signs[a] != Sign::Zero && out.signs[a] == out.signs[b]) uf.unite(a, b);
    }
  }
  out.domain_labels.assign(u.size(), -1);
  std::map<int, int> root_label;
  for (Eigen::Index v = 0; v < u.size(); ++v) {
    if (out.signs[v] == Sign::Zero) continue;
    auto [it, inserted] = root_label.emplace(uf.find(static_cast<int>(v)), static_cast<int>(root_label.size()));
    out.domain_labels[v] = it->second;
  }
  out.domain_count = static_cast<int>(root_label.size());

  std::map<std::pair<PointKey, PointKey>, int> seen;
  for (int ti = 0; ti < mesh.triangle_count(); ++ti) {
    const auto& t = mesh.triangles[ti];
    std::vector<NodalPoint> pts;
    int zeros = 0;
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      if (out.signs[a] == Sign::Zero) {
        pts.push_back(vertex_point(mesh, a));
        ++zeros;
      } else if (out.signs[b] != Sign::Zero && out.signs[a] != out.signs[b]) {
        pts.push_back(edge_point(mesh, values, a, b));
      }
    }
    if (zeros == 3 || pts.size() != 2) continue;
    NodalSegment seg{pts[0], pts[1], {ti, -1}};
    auto [it, inserted] = seen.emplace(segment_key(seg), static_cast<int>(out.segments.size()));
    if (inserted) {
      out.segments.push_back(seg);
    } else {
      out.segments[it->second].triangles[1] = ti;
    }
  }
  out.polylines = chain_segments(out.segments);
  return out;
}

CourantReport courant_check(const Spectrum& spectrum, const TriangleMesh& mesh, double tau, int random_samples,
                            double cluster_tol) {
  const auto cluster = spectrum.first_nonzero_cluster(cluster_tol);
  if (!cluster) throw DomainError("courant_check: spectrum has no nonzero eigenvalue cluster");
  const int k = cluster->multiplicity;
  const Eigen::MatrixXd basis = spectrum.extensions.middleCols(cluster->first, k);

  std::vector<Eigen::VectorXd> combos;
  for (int i = 0; i < k; ++i) combos.push_back(Eigen::VectorXd::Unit(k, i));
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) combos.push_back(Eigen::VectorXd::Unit(k, i) + Eigen::VectorXd::Unit(k, j));
  }
  std::mt19937_64 rng(0x5EC1A55ULL);
  std::normal_distribution<double> normal;
  for (int s = 0; s < random_samples; ++s) {
    Eigen::VectorXd c(k);
    for (int i = 0; i < k; ++i) c[i] = normal(rng);
    combos.push_back(c);
  }

  CourantReport report;
  report.cluster_value = cluster->value;
  report.multiplicity = k;
  for (const auto& c : combos) {
    const int count = nodal_domains(mesh, basis * c, tau).domain_count;
    ++report.checked;
    if (count != 2) report.violations.push_back({c, count});
  }
  return report;
}

std::string EndpointLabel::to_string() const {
  switch (kind) {
    case Kind::Arc:
      return std::string(steklab::to_string(arc));
    case Kind::Interior:
      return "interior";
    case Kind::Ambiguous:
      return "ambiguous";
  }
  return "?";
}

std::vector<NodalLineReport> nodal_line_endpoints(const NodalDecomposition& decomposition,
                                                  const FundamentalDomain& domain) {
  std::set<int> inside(domain.triangles.begin(), domain.triangles.end());
  std::vector<NodalSegment> restricted;
  for (const auto& s : decomposition.segments) {
    if (inside.contains(s.triangles[0]) || (s.triangles[1] >= 0 && inside.contains(s.triangles[1]))) {
      restricted.push_back(s);
    }
  }

  std::map<int, std::set<ArcLabel>> vertex_arcs;
  std::map<std::uint64_t, ArcLabel> edge_arc;
  for (const auto& arc : domain.arcs) {
    const std::size_t n = arc.vertices.size();
    for (int v : arc.vertices) vertex_arcs[v].insert(arc.label);
    const std::size_t edges = arc.closed ? n : n - 1;
    for (std::size_t i = 0; i < edges; ++i) edge_arc[edge_id(arc.vertices[i], arc.vertices[(i + 1) % n])] = arc.label;
  }

  auto classify_point = [&](const NodalPoint& p) {
    if (p.is_vertex()) {
      auto it = vertex_arcs.find(p.a);
      if (it == vertex_arcs.end()) return EndpointLabel{EndpointLabel::Kind::Interior, ArcLabel::Gamma};
      if (it->second.size() > 1) return EndpointLabel{EndpointLabel::Kind::Ambiguous, ArcLabel::Gamma};
      return EndpointLabel{EndpointLabel::Kind::Arc, *it->second.begin()};
    }
    auto it = edge_arc.find(edge_id(p.a, p.b));
    if (it == edge_arc.end()) return EndpointLabel{EndpointLabel::Kind::Interior, ArcLabel::Gamma};
    return EndpointLabel{EndpointLabel::Kind::Arc, it->second};
  };

  // Arc carrying a segment that runs along a domain boundary edge.
  auto segment_arc = [&](const NodalPoint& p, const NodalPoint& q) -> std::optional<ArcLabel> {
    if (!p.is_vertex() || !q.is_vertex()) return std::nullopt;
    auto it = edge_arc.find(edge_id(p.a, q.a));
    if (it == edge_arc.end()) return std::nullopt;
    return it->second;
  };

  std::vector<NodalLineReport> out;
  for (auto& line : chain_segments(restricted)) {
    NodalLineReport r;
    const std::size_t n = line.points.size();
    const std::size_t segs = line.closed ? n : n - 1;
    std::optional<ArcLabel> common = segment_arc(line.points[0], line.points[1 % n]);
    for (std::size_t i = 1; i < segs && common; ++i) {
      if (segment_arc(line.points[i], line.points[(i + 1) % n]) != common) common.reset();
    }
    r.coincident = common;
    if (line.closed) {
      r.endpoints = {EndpointLabel{}, EndpointLabel{}};
    } else {
      r.endpoints = {classify_point(line.points.front()), classify_point(line.points.back())};
    }
    r.line = std::move(line);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace steklab
