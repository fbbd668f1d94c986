#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "steklab/surfaces.hpp"

namespace steklab {

using Triangle = std::array<int, 3>;

struct TriangleMesh {
  std::vector<Vec3> vertices;
  /// Consistently oriented vertex triples.
  std::vector<Triangle> triangles;
  /// Closed boundary cycles, each following the triangle orientation.
  std::vector<std::vector<int>> boundary_loops;
  /// Bit k set iff the vertex lies on the symmetry plane {x_(k+1) = 0}.
  std::vector<std::uint8_t> plane_tags;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }

  /// Sorted indices of all vertices on some boundary loop.
  std::vector<int> boundary_vertices() const;
  bool on_plane(int vertex, int axis) const { return (plane_tags[vertex] >> axis) & 1U; }
};

/// Reflection group generated by coordinate planes, together with its action
/// on the vertices of a specific mesh.
struct GroupAction {
  std::vector<SymmetryPlane> generators;
  /// vertex_permutations[g][v] is the vertex at R_g(vertices[v]).
  std::vector<std::vector<int>> vertex_permutations;

  int generator_count() const { return static_cast<int>(generators.size()); }
  /// Number of copies of the fundamental domain; 2^generators for commuting
  /// reflections.
  int orbit_count() const { return 1 << generators.size(); }
  /// Permutation of a group element given as a bitmask over generators.
  std::vector<int> element_permutation(unsigned mask) const;
};

/// Grid resolution: axial (u) segment count by angular (theta) segment count.
struct Resolution {
  int axial = 0;
  int angular = 0;
};

struct SymmetricMesh {
  TriangleMesh mesh;
  GroupAction action;
};

/// Structured mesh of a catalog surface whose vertex set is exactly closed
/// under the surface's reflection group.
///
/// Angles and axial samples are evaluated on one fundamental sector and
/// propagated by exact sign flips, so every generator maps the vertex array to
/// itself bitwise. Quads are split with a diagonal pattern that flips under
/// every reflection about a multiple of pi/4 in theta (and about r = 0 for
/// catenoids), so the triangulation is equivariant as well. The angular count
/// must be a multiple of 8, and the catenoid axial count must be even.
SymmetricMesh build_symmetric_mesh(const ParametricSurface& surface, Resolution resolution);

/// Boundary cycles of a triangle mesh. Throws MeshError on non-manifold edges
/// or pinched boundary vertices.
std::vector<std::vector<int>> boundary_loops(const TriangleMesh& mesh);

/// Throws MeshError unless every generator is an involution that maps the
/// vertex array onto its reflection and triangles onto triangles of opposite
/// orientation.
void verify_action(const TriangleMesh& mesh, const GroupAction& action);

double triangle_area(const TriangleMesh& mesh, int triangle);
int edge_count(const TriangleMesh& mesh);
int euler_characteristic(const TriangleMesh& mesh);
/// Total length of the polygonal boundary loops.
double boundary_length(const TriangleMesh& mesh);

enum class ArcLabel : std::uint8_t { Gamma, E1, E2, E3 };

std::string_view to_string(ArcLabel label);
ArcLabel plane_label(int axis);
/// Axis index of a plane label, -1 for Gamma.
int label_axis(ArcLabel label);
/// Parses "gamma", "e1", "e2", "e3". Throws DomainError otherwise.
ArcLabel parse_arc_label(std::string_view name);

struct LabeledArc {
  ArcLabel label = ArcLabel::Gamma;
  /// Full-mesh vertex ids in boundary order, both end vertices included.
  std::vector<int> vertices;
  bool closed = false;
};

/// Mesh restricted to the closed orthant {x_k >= 0 for every generator k}.
struct FundamentalDomain {
  TriangleMesh submesh;
  /// lift_map[i] = full-mesh id of submesh vertex i.
  std::vector<int> lift_map;
  /// Full-mesh ids of the triangles in the domain.
  std::vector<int> triangles;
  /// Boundary of the domain split into maximal arcs with one label each:
  /// Gamma where the arc lies on the boundary of the surface, E_k where it
  /// lies on {x_k = 0}.
  std::vector<LabeledArc> arcs;

  std::vector<ArcLabel> label_multiset() const;
};

/// Throws MeshError if the mesh is not invariant under the action, or if a
/// domain boundary edge lies on two symmetry planes.
FundamentalDomain fundamental_domain(const TriangleMesh& mesh, const GroupAction& action);

}  // namespace steklab
