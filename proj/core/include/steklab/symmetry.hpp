#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "steklab/mesh.hpp"
#include "steklab/steklov.hpp"

namespace steklab {

enum class Parity : std::uint8_t { Even, Odd, Mixed };

std::string_view to_string(Parity parity);

/// Per-generator parity labels of one function.
struct ParityVector {
  std::vector<Parity> labels;
  double tolerance = 0.0;

  bool all_even() const;
  friend bool operator==(const ParityVector& a, const ParityVector& b) { return a.labels == b.labels; }
};

/// (u o R)[v] = u[perm[v]].
Eigen::VectorXd pull_back(const Eigen::VectorXd& u, std::span<const int> perm);

/// A u = (u - u o R) / 2.
Eigen::VectorXd antisymmetrize(const Eigen::VectorXd& u, std::span<const int> perm);
/// S u = (u + u o R) / 2.
Eigen::VectorXd symmetrize(const Eigen::VectorXd& u, std::span<const int> perm);

/// Even iff ||A u|| <= tol ||u||, odd iff ||S u|| <= tol ||u||, else mixed.
ParityVector parity_of(const Eigen::VectorXd& u, const GroupAction& action, double tol);

/// Permutation of the boundary slots induced by a vertex permutation.
std::vector<int> boundary_permutation(std::span<const int> boundary, std::span<const int> vertex_perm);

struct ModeParity {
  int index = 0;  ///< position in the ascending spectrum
  double eigenvalue = 0.0;
  ParityVector parity;
  Eigen::VectorXd boundary_mode;  ///< rotated within its cluster
  Eigen::VectorXd extension;
  /// False when the projected generator involutions did not have eigenvalues
  /// +-1 on the cluster (the cluster is not an invariant subspace).
  bool split_ok = true;
};

/// Parity of every mode of the spectrum. Within each eigenvalue cluster the
/// modes are replaced by a simultaneous eigenbasis of the generator
/// involutions projected onto the cluster, split one generator at a time in
/// generator order with the odd part first. Modes are then sorted by
/// eigenvalue; ties at 1e-9 keep the split order.
std::vector<ModeParity> classify(const Spectrum& spectrum, const Eigen::MatrixXd& boundary_mass,
                                 const GroupAction& action, double tol = 1e-6,
                                 double cluster_tol = kDefaultClusterTolerance);

struct CoordinateOrthogonality {
  /// u^T M x_i / (||u||_M ||x_i||_M); zero when x_i vanishes on the boundary.
  std::array<double, 3> relative_inner{};
  /// |(sigma - 1) u^T M x_i - u^T (L x_i - M x_i)| / (||u||_M ||x_i||_M), the
  /// defect of the self-adjointness identity that forces orthogonality.
  std::array<double, 3> adjoint_defect{};
};

/// Boundary inner products of a computed eigenfunction with the coordinate
/// functions. Throws DomainError when the mode's eigenvalue is within 1e-6 of 1.
CoordinateOrthogonality eigenfunction_orthogonal_to_coordinates(const SteklovProblem& problem,
                                                                const Spectrum& spectrum, int mode);
/// Same, for an arbitrary boundary vector claimed to have eigenvalue sigma.
CoordinateOrthogonality eigenfunction_orthogonal_to_coordinates(const SteklovProblem& problem,
                                                                const Eigen::VectorXd& boundary_mode,
                                                                double sigma);

}  // namespace steklab
