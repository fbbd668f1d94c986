#include "steklab/mesh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <unordered_map>

#include <Eigen/Geometry>
#include <fmt/format.h>

#include "steklab/error.hpp"

namespace steklab {

namespace {

using EdgeKey = std::uint64_t;

EdgeKey edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32U) | hi;
}

// x + 0.0 turns -0.0 into +0.0 and leaves everything else alone.
Vec3 snap(const Vec3& p) { return {p.x() + 0.0, p.y() + 0.0, p.z() + 0.0}; }

struct AngleTable {
  std::vector<double> cos;
  std::vector<double> sin;
};

// cos/sin of 2 pi j / n, exactly symmetric under the dihedral group of the
// square: evaluated on [0, pi/4] and propagated by swaps and sign flips.
AngleTable angle_table(int n) {
  AngleTable t{std::vector<double>(n), std::vector<double>(n)};
  const int eighth = n / 8;
  const int quarter = n / 4;
  const int half = n / 2;
  for (int j = 0; j < eighth; ++j) {
    const double angle = 2.0 * std::numbers::pi * j / n;
    t.cos[j] = std::cos(angle);
    t.sin[j] = j == 0 ? 0.0 : std::sin(angle);
  }
  t.cos[eighth] = t.sin[eighth] = std::sqrt(0.5);
  for (int j = eighth + 1; j <= quarter; ++j) {
    t.cos[j] = t.sin[quarter - j];
    t.sin[j] = t.cos[quarter - j];
  }
  for (int j = quarter + 1; j <= half; ++j) {
    t.cos[j] = -t.cos[half - j];
    t.sin[j] = t.sin[half - j];
  }
  for (int j = half + 1; j < n; ++j) {
    t.cos[j] = t.cos[n - j];
    t.sin[j] = -t.sin[n - j];
  }
  return t;
}

// Diagonal orientation bit for a theta cell: alternates across the eight
// sectors of width pi/4, so every reflection about a multiple of pi/4 flips it.
int theta_cell_parity(int j, int n) { return (j / (n / 8)) % 2; }

void validate_resolution(const ParametricSurface& surface, Resolution res) {
  if (res.axial < 1 || res.angular < 8) {
    throw DomainError(fmt::format("resolution {}x{} too small", res.axial, res.angular));
  }
  if (res.angular % 8 != 0) {
    throw DomainError(
        fmt::format("angular resolution {} must be a multiple of 8 to respect the reflections", res.angular));
  }
  if (surface.kind() == SurfaceKind::Catenoid && res.axial % 2 != 0) {
    throw DomainError(
        fmt::format("axial resolution {} must be even to respect the reflection through z = 0", res.axial));
  }
}

void check_triangle_areas(const TriangleMesh& mesh) {
  if (mesh.triangles.empty()) throw MeshError("mesh has no triangles");
  std::vector<double> areas(mesh.triangles.size());
  for (int t = 0; t < mesh.triangle_count(); ++t) areas[t] = triangle_area(mesh, t);
  const double mean = std::accumulate(areas.begin(), areas.end(), 0.0) / static_cast<double>(areas.size());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (!(areas[t] > 1e-14 * mean)) {
      throw MeshError(fmt::format("degenerate triangle {} (area {:.3e}, mean {:.3e})", t, areas[t], mean));
    }
  }
}

std::vector<std::uint8_t> compute_plane_tags(const std::vector<Vec3>& vertices,
                                             std::span<const SymmetryPlane> planes) {
  std::vector<std::uint8_t> tags(vertices.size(), 0);
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    for (const auto& plane : planes) {
      if (vertices[v][plane.axis] == 0.0) tags[v] |= static_cast<std::uint8_t>(1U << plane.axis);
    }
  }
  return tags;
}

// Splits the quad (a, b, c, d), listed counter-clockwise, along a-c or b-d.
void push_quad(std::vector<Triangle>& tris, int a, int b, int c, int d, int diagonal) {
  if (diagonal == 0) {
    tris.push_back({a, b, c});
    tris.push_back({a, c, d});
  } else {
    tris.push_back({a, b, d});
    tris.push_back({b, c, d});
  }
}

}  // namespace

std::vector<int> TriangleMesh::boundary_vertices() const {
  std::vector<int> out;
  for (const auto& loop : boundary_loops) out.insert(out.end(), loop.begin(), loop.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> GroupAction::element_permutation(unsigned mask) const {
  const std::size_t n = vertex_permutations.empty() ? 0 : vertex_permutations.front().size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int g = 0; g < generator_count(); ++g) {
    if (((mask >> g) & 1U) == 0) continue;
    for (auto& v : perm) v = vertex_permutations[g][v];
  }
  return perm;
}

SymmetricMesh build_symmetric_mesh(const ParametricSurface& surface, Resolution res) {
  validate_resolution(surface, res);
  const int n = res.angular;
  const int nu = res.axial;
  const AngleTable angles = angle_table(n);

  // Per-ring radius (distance from the z axis) and height.
  std::vector<double> radius(nu + 1);
  std::vector<double> height(nu + 1, 0.0);
  bool center_vertex = false;
  int first_ring = 0;

  switch (surface.kind()) {
    case SurfaceKind::Catenoid: {
      const CatenoidParams p = *surface.catenoid_params();
      for (int i = nu / 2; i <= nu; ++i) {
        const double r = p.rho * static_cast<double>(2 * i - nu) / nu;
        radius[i] = p.scale * std::cosh(r);
        height[i] = p.scale * r;
      }
      for (int i = 0; i < nu / 2; ++i) {
        radius[i] = radius[nu - i];
        height[i] = -height[nu - i];
      }
      break;
    }
    case SurfaceKind::Disk:
      center_vertex = true;
      first_ring = 1;
      for (int i = 0; i <= nu; ++i) radius[i] = static_cast<double>(i) / nu;
      break;
    case SurfaceKind::Annulus: {
      const double a = surface.inner_radius();
      for (int i = 0; i <= nu; ++i) radius[i] = a + (1.0 - a) * static_cast<double>(i) / nu;
      radius[nu] = 1.0;
      break;
    }
  }

  SymmetricMesh out;
  TriangleMesh& mesh = out.mesh;
  const int ring_count = nu + 1 - first_ring;
  const int offset = center_vertex ? 1 : 0;
  auto vid = [&](int ring, int j) { return offset + (ring - first_ring) * n + ((j % n) + n) % n; };

  mesh.vertices.reserve(static_cast<std::size_t>(offset + ring_count * n));
  if (center_vertex) mesh.vertices.emplace_back(0.0, 0.0, 0.0);
  for (int i = first_ring; i <= nu; ++i) {
    for (int j = 0; j < n; ++j) {
      mesh.vertices.push_back(snap(Vec3(radius[i] * angles.cos[j], radius[i] * angles.sin[j], height[i])));
    }
  }

  const bool axial_mirror = surface.kind() == SurfaceKind::Catenoid;
  if (center_vertex) {
    for (int j = 0; j < n; ++j) mesh.triangles.push_back({0, vid(1, j), vid(1, j + 1)});
  }
  for (int i = first_ring; i < nu; ++i) {
    const int axial_bit = axial_mirror && i >= nu / 2 ? 1 : 0;
    for (int j = 0; j < n; ++j) {
      push_quad(mesh.triangles, vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1),
                axial_bit ^ theta_cell_parity(j, n));
    }
  }

  mesh.plane_tags = compute_plane_tags(mesh.vertices, surface.symmetry_planes());
  check_triangle_areas(mesh);
  mesh.boundary_loops = boundary_loops(mesh);

  GroupAction& action = out.action;
  action.generators.assign(surface.symmetry_planes().begin(), surface.symmetry_planes().end());
  for (const auto& plane : action.generators) {
    std::vector<int> perm(mesh.vertices.size());
    if (center_vertex) perm[0] = 0;
    for (int i = first_ring; i <= nu; ++i) {
      for (int j = 0; j < n; ++j) {
        switch (plane.axis) {
          case 0:
            perm[vid(i, j)] = vid(i, n / 2 - j);
            break;
          case 1:
            perm[vid(i, j)] = vid(i, n - j);
            break;
          default:
            perm[vid(i, j)] = vid(nu - i, j);
            break;
        }
      }
    }
    action.vertex_permutations.push_back(std::move(perm));
  }
  verify_action(mesh, action);
  return out;
}

std::vector<std::vector<int>> boundary_loops(const TriangleMesh& mesh) {
  std::unordered_map<EdgeKey, int> uses;
  uses.reserve(mesh.triangles.size() * 3);
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) ++uses[edge_key(t[k], t[(k + 1) % 3])];
  }
  std::map<int, int> next;
  for (int ti = 0; ti < mesh.triangle_count(); ++ti) {
    const auto& t = mesh.triangles[ti];
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      const int count = uses[edge_key(a, b)];
      if (count > 2) {
        throw MeshError(fmt::format("non-manifold edge ({}, {}) shared by {} triangles", a, b, count));
      }
      if (count == 1) {
        if (!next.emplace(a, b).second) {
          throw MeshError(fmt::format("pinched boundary at vertex {}", a));
        }
      }
    }
  }
  std::vector<std::vector<int>> loops;
  std::set<int> visited;
  for (const auto& [start, unused] : next) {
    if (visited.contains(start)) continue;
    std::vector<int> loop;
    int v = start;
    do {
      loop.push_back(v);
      visited.insert(v);
      auto it = next.find(v);
      if (it == next.end()) throw MeshError(fmt::format("open boundary chain at vertex {}", v));
      v = it->second;
    } while (v != start && !visited.contains(v));
    if (v != start) throw MeshError(fmt::format("boundary chain through vertex {} is not a simple cycle", v));
    loops.push_back(std::move(loop));
  }
  return loops;
}

void verify_action(const TriangleMesh& mesh, const GroupAction& action) {
  const std::size_t nv = mesh.vertices.size();
  std::unordered_map<std::uint64_t, int> oriented;  // sorted key -> index
  auto tri_key = [](Triangle t) {
    std::sort(t.begin(), t.end());
    return (static_cast<std::uint64_t>(t[0]) << 42U) ^ (static_cast<std::uint64_t>(t[1]) << 21U) ^
           static_cast<std::uint64_t>(t[2]);
  };
  for (int ti = 0; ti < mesh.triangle_count(); ++ti) oriented.emplace(tri_key(mesh.triangles[ti]), ti);

  auto same_cycle = [](const Triangle& a, const Triangle& b) {
    for (int s = 0; s < 3; ++s) {
      if (a[0] == b[s] && a[1] == b[(s + 1) % 3] && a[2] == b[(s + 2) % 3]) return true;
    }
    return false;
  };

  for (int g = 0; g < action.generator_count(); ++g) {
    const auto& perm = action.vertex_permutations[g];
    const SymmetryPlane plane = action.generators[g];
    if (perm.size() != nv) throw MeshError(fmt::format("generator {} permutation has wrong size", g));
    for (std::size_t v = 0; v < nv; ++v) {
      const int w = perm[v];
      if (w < 0 || static_cast<std::size_t>(w) >= nv || perm[w] != static_cast<int>(v)) {
        throw MeshError(fmt::format("generator {} is not an involution at vertex {}", g, v));
      }
      const Vec3 reflected = snap(plane.reflect(mesh.vertices[v]));
      if (reflected != mesh.vertices[w]) {
        throw MeshError(fmt::format("mesh not invariant: reflecting vertex {} in x{} = 0 misses vertex {}", v,
                                    plane.axis + 1, w));
      }
    }
    for (const auto& t : mesh.triangles) {
      const Triangle image{perm[t[0]], perm[t[1]], perm[t[2]]};
      auto it = oriented.find(tri_key(image));
      if (it == oriented.end()) {
        throw MeshError(fmt::format("generator {} maps a triangle outside the mesh", g));
      }
      const Triangle flipped{image[0], image[2], image[1]};
      if (!same_cycle(flipped, mesh.triangles[it->second])) {
        throw MeshError(fmt::format("generator {} preserves the orientation of triangle {}", g, it->second));
      }
    }
  }
}

double triangle_area(const TriangleMesh& mesh, int triangle) {
  const auto& t = mesh.triangles[triangle];
  const Vec3& a = mesh.vertices[t[0]];
  return 0.5 * (mesh.vertices[t[1]] - a).cross(mesh.vertices[t[2]] - a).norm();
}

int edge_count(const TriangleMesh& mesh) {
  std::set<EdgeKey> edges;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) edges.insert(edge_key(t[k], t[(k + 1) % 3]));
  }
  return static_cast<int>(edges.size());
}

int euler_characteristic(const TriangleMesh& mesh) {
  return mesh.vertex_count() - edge_count(mesh) + mesh.triangle_count();
}

double boundary_length(const TriangleMesh& mesh) {
  double total = 0.0;
  for (const auto& loop : mesh.boundary_loops) {
    for (std::size_t i = 0; i < loop.size(); ++i) {
      total += (mesh.vertices[loop[(i + 1) % loop.size()]] - mesh.vertices[loop[i]]).norm();
    }
  }
  return total;
}

std::string_view to_string(ArcLabel label) {
  switch (label) {
    case ArcLabel::Gamma:
      return "gamma";
    case ArcLabel::E1:
      return "e1";
    case ArcLabel::E2:
      return "e2";
    case ArcLabel::E3:
      return "e3";
  }
  return "?";
}

ArcLabel plane_label(int axis) {
  if (axis < 0 || axis > 2) throw DomainError(fmt::format("no plane label for axis {}", axis));
  return static_cast<ArcLabel>(axis + 1);
}

int label_axis(ArcLabel label) { return static_cast<int>(label) - 1; }

ArcLabel parse_arc_label(std::string_view name) {
  for (ArcLabel l : {ArcLabel::Gamma, ArcLabel::E1, ArcLabel::E2, ArcLabel::E3}) {
    if (to_string(l) == name) return l;
  }
  throw DomainError(fmt::format("unknown edge name '{}' (expected gamma, e1, e2 or e3)", name));
}

std::vector<ArcLabel> FundamentalDomain::label_multiset() const {
  std::vector<ArcLabel> labels;
  for (const auto& arc : arcs) labels.push_back(arc.label);
  std::sort(labels.begin(), labels.end());
  return labels;
}

FundamentalDomain fundamental_domain(const TriangleMesh& mesh, const GroupAction& action) {
  verify_action(mesh, action);

  auto in_orthant = [&](int v) {
    for (const auto& plane : action.generators) {
      if (mesh.vertices[v][plane.axis] < 0.0) return false;
    }
    return true;
  };

  FundamentalDomain fd;
  std::vector<int> local(mesh.vertices.size(), -1);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    if (in_orthant(tri[0]) && in_orthant(tri[1]) && in_orthant(tri[2])) fd.triangles.push_back(t);
  }
  if (fd.triangles.size() * static_cast<std::size_t>(action.orbit_count()) != mesh.triangles.size()) {
    throw MeshError(fmt::format("orthant holds {} of {} triangles; the mesh is not plane-conforming",
                                fd.triangles.size(), mesh.triangles.size()));
  }
  for (int t : fd.triangles) {
    for (int v : mesh.triangles[t]) local[v] = 0;
  }
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (local[v] == 0) {
      local[v] = static_cast<int>(fd.lift_map.size());
      fd.lift_map.push_back(v);
    }
  }
  TriangleMesh& sub = fd.submesh;
  for (int v : fd.lift_map) {
    sub.vertices.push_back(mesh.vertices[v]);
    sub.plane_tags.push_back(mesh.plane_tags[v]);
  }
  for (int t : fd.triangles) {
    const auto& tri = mesh.triangles[t];
    sub.triangles.push_back({local[tri[0]], local[tri[1]], local[tri[2]]});
  }
  sub.boundary_loops = boundary_loops(sub);

  std::set<EdgeKey> surface_boundary;
  for (const auto& loop : mesh.boundary_loops) {
    for (std::size_t k = 0; k < loop.size(); ++k) surface_boundary.insert(edge_key(loop[k], loop[(k + 1) % loop.size()]));
  }
  unsigned generator_mask = 0;
  for (const auto& plane : action.generators) generator_mask |= 1U << plane.axis;

  auto classify_edge = [&](int a, int b) {
    if (surface_boundary.contains(edge_key(a, b))) return ArcLabel::Gamma;
    const unsigned common = mesh.plane_tags[a] & mesh.plane_tags[b] & generator_mask;
    if (common == 0) {
      throw MeshError(fmt::format("domain boundary edge ({}, {}) lies on no symmetry plane", a, b));
    }
    if (std::popcount(common) > 1) {
      throw MeshError(fmt::format("ambiguous labeling: edge ({}, {}) lies on two symmetry planes", a, b));
    }
    return plane_label(std::countr_zero(common));
  };

  for (const auto& sub_loop : sub.boundary_loops) {
    const std::size_t m = sub_loop.size();
    std::vector<int> loop(m);
    for (std::size_t k = 0; k < m; ++k) loop[k] = fd.lift_map[sub_loop[k]];
    std::vector<ArcLabel> labels(m);
    for (std::size_t k = 0; k < m; ++k) labels[k] = classify_edge(loop[k], loop[(k + 1) % m]);

    std::size_t start = m;
    for (std::size_t k = 0; k < m; ++k) {
      if (labels[k] != labels[(k + m - 1) % m]) {
        start = k;
        break;
      }
    }
    if (start == m) {
      fd.arcs.push_back({labels[0], loop, true});
      continue;
    }
    LabeledArc current{labels[start], {loop[start]}, false};
    for (std::size_t step = 0; step < m; ++step) {
      const std::size_t k = (start + step) % m;
      if (labels[k] != current.label) {
        fd.arcs.push_back(std::move(current));
        current = LabeledArc{labels[k], {loop[k]}, false};
      }
      current.vertices.push_back(loop[(k + 1) % m]);
    }
    fd.arcs.push_back(std::move(current));
  }
  return fd;
}

}  // namespace steklab
