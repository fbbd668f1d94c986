#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "steklab/mesh.hpp"
#include "steklab/steklov.hpp"

namespace steklab {

inline constexpr double kDefaultNodalTau = 1e-8;

enum class Sign : std::int8_t { Negative = -1, Zero = 0, Positive = 1 };

/// A point of the discrete nodal set: a zero vertex (b < 0) or the linear
/// zero crossing at parameter t along edge (a, b), a < b.
struct NodalPoint {
  int a = -1;
  int b = -1;
  double t = 0.0;
  Vec3 position = Vec3::Zero();

  bool is_vertex() const { return b < 0; }
  friend bool operator==(const NodalPoint& p, const NodalPoint& q) { return p.a == q.a && p.b == q.b; }
};

/// Piece of the nodal set inside one triangle, or along an edge whose two
/// vertices are zero (then both incident triangles are recorded).
struct NodalSegment {
  NodalPoint p;
  NodalPoint q;
  std::array<int, 2> triangles{-1, -1};
};

struct NodalPolyline {
  std::vector<NodalPoint> points;
  bool closed = false;
};

struct NodalDecomposition {
  std::vector<Sign> signs;
  /// Component id of every signed vertex, -1 for zero vertices.
  std::vector<int> domain_labels;
  int domain_count = 0;
  double threshold = 0.0;  ///< absolute zero threshold tau * max|u|
  std::vector<NodalSegment> segments;
  std::vector<NodalPolyline> polylines;
};

/// Vertices with |u| <= tau * max|u| are zero; the remaining vertices are
/// grouped into connected components of equal sign along mesh edges. Zero
/// vertices join no component. Throws DomainError if tau < 0 or every vertex
/// is zero.
NodalDecomposition nodal_domains(const TriangleMesh& mesh, const Eigen::VectorXd& u,
                                 double tau = kDefaultNodalTau);

/// Chains segments sharing endpoints into maximal polylines.
std::vector<NodalPolyline> chain_segments(std::span<const NodalSegment> segments);

struct CourantViolation {
  Eigen::VectorXd coefficients;  ///< combination of the cluster basis
  int domain_count = 0;
};

struct CourantReport {
  double cluster_value = 0.0;
  int multiplicity = 0;
  int checked = 0;
  std::vector<CourantViolation> violations;

  bool passed() const { return violations.empty(); }
};

/// Counts nodal domains of each member of the first nonzero eigenvalue
/// cluster, of every pairwise sum, and of random_samples Gaussian combinations
/// drawn from a fixed seed. Every one must have exactly two domains.
CourantReport courant_check(const Spectrum& spectrum, const TriangleMesh& mesh,
                            double tau = kDefaultNodalTau, int random_samples = 8,
                            double cluster_tol = kDefaultClusterTolerance);

struct EndpointLabel {
  enum class Kind : std::uint8_t { Arc, Interior, Ambiguous };
  Kind kind = Kind::Interior;
  ArcLabel arc = ArcLabel::Gamma;

  std::string to_string() const;
  friend bool operator==(const EndpointLabel&, const EndpointLabel&) = default;
};

struct NodalLineReport {
  NodalPolyline line;
  std::array<EndpointLabel, 2> endpoints;
  /// Set when every segment of the line runs along one labeled arc.
  std::optional<ArcLabel> coincident;
};

/// Nodal polylines restricted to the fundamental domain, with each endpoint
/// classified by the arc it lies on. Endpoints on two arcs (domain corners)
/// are ambiguous; closed lines report interior endpoints.
std::vector<NodalLineReport> nodal_line_endpoints(const NodalDecomposition& decomposition,
                                                  const FundamentalDomain& domain);

}  // namespace steklab
