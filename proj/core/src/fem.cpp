#include "steklab/fem.hpp"

#include <numeric>
#include <vector>

#include <Eigen/Geometry>
#include <fmt/format.h>

#include "steklab/error.hpp"

namespace steklab {

SparseSymMatrix::SparseSymMatrix(Eigen::SparseMatrix<double> matrix) : matrix_(std::move(matrix)) {
  matrix_.makeCompressed();
}

Eigen::VectorXd SparseSymMatrix::apply(const Eigen::VectorXd& u) const {
  if (u.size() != matrix_.cols()) {
    throw DomainError(fmt::format("vector of size {} applied to a {}x{} matrix", u.size(), matrix_.rows(),
                                  matrix_.cols()));
  }
  return matrix_ * u;
}

double SparseSymMatrix::quadratic_form(const Eigen::VectorXd& u) const { return u.dot(apply(u)); }

double SparseSymMatrix::bilinear_form(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  if (u.size() != v.size()) throw DomainError("bilinear_form: dimension mismatch");
  return u.dot(apply(v));
}

std::array<double, 3> cotangent_weights(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 corners[3] = {a, b, c};
  std::array<double, 3> w{};
  for (int k = 0; k < 3; ++k) {
    const Vec3& p = corners[k];
    const Vec3 e1 = corners[(k + 1) % 3] - p;
    const Vec3 e2 = corners[(k + 2) % 3] - p;
    w[k] = 0.5 * e1.dot(e2) / e1.cross(e2).norm();
  }
  return w;
}

SparseSymMatrix assemble_stiffness(const TriangleMesh& mesh) {
  const int n = mesh.vertex_count();
  std::vector<double> areas(mesh.triangles.size());
  for (int t = 0; t < mesh.triangle_count(); ++t) areas[t] = triangle_area(mesh, t);
  const double mean = areas.empty() ? 0.0 : std::accumulate(areas.begin(), areas.end(), 0.0) / areas.size();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh.triangles.size() * 9);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (!(areas[t] > 1e-14 * mean) || !(areas[t] > 0.0)) {
      throw MeshError(fmt::format("stiffness assembly: degenerate triangle {} (area {:.3e})", t, areas[t]));
    }
    const auto& tri = mesh.triangles[t];
    const auto w = cotangent_weights(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
    for (int k = 0; k < 3; ++k) {
      // w[k] belongs to the edge opposite corner k.
      const int i = tri[(k + 1) % 3];
      const int j = tri[(k + 2) % 3];
      triplets.emplace_back(i, j, -w[k]);
      triplets.emplace_back(j, i, -w[k]);
      triplets.emplace_back(i, i, w[k]);
      triplets.emplace_back(j, j, w[k]);
    }
  }
  Eigen::SparseMatrix<double> k(n, n);
  k.setFromTriplets(triplets.begin(), triplets.end());
  return SparseSymMatrix(std::move(k));
}

SparseSymMatrix assemble_boundary_mass(const TriangleMesh& mesh) {
  const int n = mesh.vertex_count();
  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& loop : mesh.boundary_loops) {
    const std::size_t m = loop.size();
    for (std::size_t k = 0; k < m; ++k) {
      const int a = loop[k];
      const int b = loop[(k + 1) % m];
      const double length = (mesh.vertices[b] - mesh.vertices[a]).norm();
      triplets.emplace_back(a, a, length / 3.0);
      triplets.emplace_back(b, b, length / 3.0);
      triplets.emplace_back(a, b, length / 6.0);
      triplets.emplace_back(b, a, length / 6.0);
    }
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return SparseSymMatrix(std::move(m));
}

double dirichlet_energy(const TriangleMesh& mesh, const Eigen::VectorXd& u) {
  if (u.size() != mesh.vertex_count()) {
    throw DomainError(fmt::format("dirichlet_energy: {} values for {} vertices", u.size(), mesh.vertex_count()));
  }
  return assemble_stiffness(mesh).quadratic_form(u);
}

std::string to_matrix_market(const SparseSymMatrix& matrix) {
  const auto& m = matrix.matrix();
  std::string out = "%%MatrixMarket matrix coordinate real general\n";
  out += fmt::format("{} {} {}\n", m.rows(), m.cols(), m.nonZeros());
  for (int col = 0; col < m.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, col); it; ++it) {
      out += fmt::format("{} {} {:.17g}\n", it.row() + 1, it.col() + 1, it.value());
    }
  }
  return out;
}

}  // namespace steklab
