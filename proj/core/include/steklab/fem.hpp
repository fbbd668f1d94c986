#pragma once

#include <array>
#include <string>

#include <Eigen/Sparse>

#include "steklab/mesh.hpp"

namespace steklab {

/// Symmetric sparse matrix assembled on mesh vertices. Both triangles of the
/// storage are kept so products need no symmetric view.
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;
  explicit SparseSymMatrix(Eigen::SparseMatrix<double> matrix);

  int dimension() const { return static_cast<int>(matrix_.rows()); }
  double entry(int i, int j) const { return matrix_.coeff(i, j); }
  const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
  /// u^T A u. Throws DomainError on dimension mismatch.
  double quadratic_form(const Eigen::VectorXd& u) const;
  double bilinear_form(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

 private:
  Eigen::SparseMatrix<double> matrix_;
};

/// Half cotangents of the angles of triangle (a, b, c), ordered by the edge
/// opposite each angle: {bc, ca, ab}.
std::array<double, 3> cotangent_weights(const Vec3& a, const Vec3& b, const Vec3& c);

/// P1 stiffness matrix: u^T K v = sum over triangles of the integral of
/// grad u . grad v. Assembled in triangle order.
SparseSymMatrix assemble_stiffness(const TriangleMesh& mesh);

/// Consistent P1 mass matrix of the boundary curves: each boundary edge of
/// length L contributes L/6 [2 1; 1 2].
SparseSymMatrix assemble_boundary_mass(const TriangleMesh& mesh);

/// u^T K u for the stiffness matrix of the mesh.
double dirichlet_energy(const TriangleMesh& mesh, const Eigen::VectorXd& u);

/// Matrix Market coordinate format (general, 1-based), values to 17 digits.
std::string to_matrix_market(const SparseSymMatrix& matrix);

}  // namespace steklab
