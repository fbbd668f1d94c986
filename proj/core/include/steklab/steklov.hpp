#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "steklab/fem.hpp"

namespace steklab {

/// Relative gap below which neighbouring eigenvalues are grouped into one
/// cluster by default. Eigenvalues that are degenerate on the smooth surface
/// but not related by a mesh symmetry split at discretization scale, so the
/// default is a discretization tolerance rather than a round-off one.
inline constexpr double kDefaultClusterTolerance = 1e-2;

/// Grouping tolerance for eigenvalues whose degeneracy is forced by an exact
/// mesh symmetry.
inline constexpr double kExactClusterTolerance = 1e-6;

struct Cluster {
  double value = 0.0;  ///< mean of the member eigenvalues
  int multiplicity = 0;
  int first = 0;  ///< index of the first member in the ascending spectrum
};

/// Single-linkage grouping of an ascending sequence: consecutive values join a
/// cluster when their gap is at most rel_tol * (1 + |value|).
std::vector<Cluster> cluster_eigenvalues(std::span<const double> values, double rel_tol);

/// Discrete Dirichlet-to-Neumann operator on the boundary vertices of a mesh:
///   L = K_bb - K_bi K_ii^{-1} K_ib.
/// Keeps the sparse factorization of K_ii for harmonic extension.
class DtnOperator {
 public:
  DtnOperator(const SparseSymMatrix& stiffness, std::vector<int> boundary);

  const Eigen::MatrixXd& matrix() const { return dtn_; }
  std::span<const int> boundary() const { return boundary_; }
  std::span<const int> interior() const { return interior_; }
  int vertex_count() const { return vertex_count_; }

  /// Values on all vertices: the given boundary values, and interior values
  /// solving K_ii v_i = -K_ib v_b.
  Eigen::VectorXd extend(const Eigen::VectorXd& boundary_values) const;
  Eigen::MatrixXd extend(const Eigen::MatrixXd& boundary_values) const;

  Eigen::VectorXd restrict_to_boundary(const Eigen::VectorXd& u) const;

 private:
  int vertex_count_ = 0;
  std::vector<int> boundary_;
  std::vector<int> interior_;
  Eigen::SparseMatrix<double> interior_block_;
  Eigen::SparseMatrix<double> coupling_;  // K_ib
  std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> factor_;
  Eigen::MatrixXd dtn_;
};

/// Schur complement of the stiffness matrix onto the given boundary set.
/// Throws SolverError when the interior block is singular.
Eigen::MatrixXd dtn_operator(const SparseSymMatrix& stiffness, std::span<const int> boundary);

/// Harmonic extension of boundary data, using the boundary set of the values.
Eigen::VectorXd harmonic_extension(const SparseSymMatrix& stiffness, std::span<const int> boundary,
                                   const Eigen::VectorXd& boundary_values);

struct Spectrum {
  std::vector<double> eigenvalues;
  /// Boundary eigenvectors (columns), orthonormal in the boundary mass.
  Eigen::MatrixXd boundary_modes;
  /// Harmonic extension of each mode to all vertices (columns).
  Eigen::MatrixXd extensions;
  std::vector<int> boundary_indices;
  std::string mesh_id;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  std::vector<Cluster> clusters(double rel_tol = kDefaultClusterTolerance) const {
    return cluster_eigenvalues(eigenvalues, rel_tol);
  }
  /// First cluster whose value exceeds the round-off level of sigma_0.
  std::optional<Cluster> first_nonzero_cluster(double rel_tol = kDefaultClusterTolerance) const;
};

/// Flips the sign of v so that its first entry of (numerically) largest
/// magnitude is positive.
void normalize_sign(Eigen::Ref<Eigen::VectorXd> v);

/// Stiffness, boundary mass and DtN operator of one mesh, assembled once.
class SteklovProblem {
 public:
  /// The mesh must outlive the problem.
  explicit SteklovProblem(const TriangleMesh& mesh, std::string mesh_id = {});
  explicit SteklovProblem(TriangleMesh&&, std::string = {}) = delete;

  const TriangleMesh& mesh() const { return *mesh_; }
  const SparseSymMatrix& stiffness() const { return stiffness_; }
  const SparseSymMatrix& boundary_mass() const { return mass_; }
  const DtnOperator& dtn() const { return dtn_; }
  /// Boundary mass restricted to boundary vertices, in boundary() order.
  const Eigen::MatrixXd& boundary_mass_block() const { return mass_block_; }

  /// Solves L y = sigma M_b y and returns the lowest num_modes pairs.
  Spectrum spectrum(int num_modes) const;

  /// u^T K u / u^T M u over all vertices.
  double rayleigh_quotient(const Eigen::VectorXd& u) const;

  /// ||L x_i - M_b x_i|| / ||M_b x_i|| on boundary vertices for each
  /// coordinate. Coordinates vanishing on the boundary are reported as
  /// nullopt. Throws DomainError unless every boundary vertex lies on the
  /// unit sphere to 1e-8.
  std::array<std::optional<double>, 3> coordinate_residual() const;

  /// Coordinate function x_(axis+1) on all vertices.
  Eigen::VectorXd coordinate(int axis) const;

 private:
  const TriangleMesh* mesh_;
  std::string mesh_id_;
  SparseSymMatrix stiffness_;
  SparseSymMatrix mass_;
  DtnOperator dtn_;
  Eigen::MatrixXd mass_block_;
};

Spectrum steklov_spectrum(const TriangleMesh& mesh, int num_modes);
double rayleigh_quotient(const TriangleMesh& mesh, const Eigen::VectorXd& u);
std::array<std::optional<double>, 3> coordinate_residual(const TriangleMesh& mesh);

/// Observed convergence order from three values on meshes refined by 2.
double richardson_order(double coarse, double medium, double fine);

}  // namespace steklab
