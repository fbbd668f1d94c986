#include "steklab/steklov.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "steklab/error.hpp"

namespace steklab {

namespace {

// Columns of the interior/boundary coupling solved per batch when forming the
// Schur complement; bounds the dense workspace to interior_count * kBatch.
constexpr int kBatch = 64;

}  // namespace

std::vector<Cluster> cluster_eigenvalues(std::span<const double> values, double rel_tol) {
  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool joins = !clusters.empty() &&
                       values[i] - values[i - 1] <= rel_tol * (1.0 + std::abs(values[i]));
    if (joins) {
      Cluster& c = clusters.back();
      c.value = (c.value * c.multiplicity + values[i]) / (c.multiplicity + 1);
      ++c.multiplicity;
    } else {
      clusters.push_back({values[i], 1, static_cast<int>(i)});
    }
  }
  return clusters;
}

std::optional<Cluster> Spectrum::first_nonzero_cluster(double rel_tol) const {
  for (const auto& c : clusters(rel_tol)) {
    if (c.value > 1e-8) return c;
  }
  return std::nullopt;
}

void normalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  if (v.size() == 0) return;
  const double peak = v.cwiseAbs().maxCoeff();
  if (peak == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= (1.0 - 1e-8) * peak) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

DtnOperator::DtnOperator(const SparseSymMatrix& stiffness, std::vector<int> boundary)
    : vertex_count_(stiffness.dimension()), boundary_(std::move(boundary)) {
  std::sort(boundary_.begin(), boundary_.end());
  boundary_.erase(std::unique(boundary_.begin(), boundary_.end()), boundary_.end());
  if (boundary_.empty()) throw SolverError("DtN operator needs a nonempty boundary set");
  if (boundary_.front() < 0 || boundary_.back() >= vertex_count_) {
    throw DomainError("boundary index outside the stiffness matrix");
  }

  // local[v] >= 0: interior slot; local[v] < 0: boundary slot -(local+1).
  std::vector<int> local(vertex_count_, 0);
  for (std::size_t b = 0; b < boundary_.size(); ++b) local[boundary_[b]] = -static_cast<int>(b) - 1;
  for (int v = 0; v < vertex_count_; ++v) {
    if (local[v] >= 0) {
      local[v] = static_cast<int>(interior_.size());
      interior_.push_back(v);
    }
  }
  const auto ni = static_cast<Eigen::Index>(interior_.size());
  const auto nb = static_cast<Eigen::Index>(boundary_.size());

  std::vector<Eigen::Triplet<double>> ii;
  std::vector<Eigen::Triplet<double>> ib;
  dtn_ = Eigen::MatrixXd::Zero(nb, nb);
  const auto& k = stiffness.matrix();
  for (int col = 0; col < k.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(k, col); it; ++it) {
      const int r = local[it.row()];
      const int c = local[it.col()];
      if (r >= 0 && c >= 0) {
        ii.emplace_back(r, c, it.value());
      } else if (r >= 0) {
        ib.emplace_back(r, -c - 1, it.value());
      } else if (c < 0) {
        dtn_(-r - 1, -c - 1) = it.value();
      }
    }
  }
  if (ni == 0) return;

  interior_block_.resize(ni, ni);
  interior_block_.setFromTriplets(ii.begin(), ii.end());
  coupling_.resize(ni, nb);
  coupling_.setFromTriplets(ib.begin(), ib.end());

  factor_ = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(interior_block_);
  if (factor_->info() != Eigen::Success) throw SolverError("factorization of the interior stiffness block failed");
  const Eigen::VectorXd pivots = factor_->vectorD();
  const double largest = pivots.cwiseAbs().maxCoeff();
  if (!(pivots.minCoeff() > 1e-12 * largest)) {
    throw SolverError(
        "interior stiffness block is singular: some mesh component does not touch the boundary");
  }

  for (Eigen::Index start = 0; start < nb; start += kBatch) {
    const Eigen::Index width = std::min<Eigen::Index>(kBatch, nb - start);
    const Eigen::MatrixXd rhs = Eigen::MatrixXd(coupling_.middleCols(start, width));
    const Eigen::MatrixXd solved = factor_->solve(rhs);
    dtn_.middleCols(start, width).noalias() -= coupling_.transpose() * solved;
  }
  // The two halves agree to round-off; store the exact symmetric part.
  const Eigen::MatrixXd sym = 0.5 * (dtn_ + dtn_.transpose());
  dtn_ = sym;
}

Eigen::VectorXd DtnOperator::extend(const Eigen::VectorXd& boundary_values) const {
  if (boundary_values.size() != static_cast<Eigen::Index>(boundary_.size())) {
    throw DomainError(fmt::format("harmonic extension: {} boundary values for {} boundary vertices",
                                  boundary_values.size(), boundary_.size()));
  }
  Eigen::VectorXd out(vertex_count_);
  for (std::size_t b = 0; b < boundary_.size(); ++b) out[boundary_[b]] = boundary_values[b];
  if (interior_.empty()) return out;
  const Eigen::VectorXd interior = factor_->solve(-(coupling_ * boundary_values));
  if (factor_->info() != Eigen::Success) throw SolverError("harmonic extension solve failed");
  for (std::size_t i = 0; i < interior_.size(); ++i) out[interior_[i]] = interior[i];
  return out;
}

Eigen::MatrixXd DtnOperator::extend(const Eigen::MatrixXd& boundary_values) const {
  Eigen::MatrixXd out(vertex_count_, boundary_values.cols());
  for (Eigen::Index c = 0; c < boundary_values.cols(); ++c) out.col(c) = extend(Eigen::VectorXd(boundary_values.col(c)));
  return out;
}

Eigen::VectorXd DtnOperator::restrict_to_boundary(const Eigen::VectorXd& u) const {
  if (u.size() != vertex_count_) throw DomainError("restrict_to_boundary: dimension mismatch");
  Eigen::VectorXd out(boundary_.size());
  for (std::size_t b = 0; b < boundary_.size(); ++b) out[b] = u[boundary_[b]];
  return out;
}

Eigen::MatrixXd dtn_operator(const SparseSymMatrix& stiffness, std::span<const int> boundary) {
  return DtnOperator(stiffness, {boundary.begin(), boundary.end()}).matrix();
}

Eigen::VectorXd harmonic_extension(const SparseSymMatrix& stiffness, std::span<const int> boundary,
                                   const Eigen::VectorXd& boundary_values) {
  return DtnOperator(stiffness, {boundary.begin(), boundary.end()}).extend(boundary_values);
}

SteklovProblem::SteklovProblem(const TriangleMesh& mesh, std::string mesh_id)
    : mesh_(&mesh),
      mesh_id_(std::move(mesh_id)),
      stiffness_(assemble_stiffness(mesh)),
      mass_(assemble_boundary_mass(mesh)),
      dtn_(stiffness_, mesh.boundary_vertices()) {
  const auto boundary = dtn_.boundary();
  const auto nb = static_cast<Eigen::Index>(boundary.size());
  mass_block_ = Eigen::MatrixXd::Zero(nb, nb);
  for (Eigen::Index r = 0; r < nb; ++r) {
    for (Eigen::Index c = 0; c < nb; ++c) mass_block_(r, c) = mass_.entry(boundary[r], boundary[c]);
  }
}

Spectrum SteklovProblem::spectrum(int num_modes) const {
  const auto nb = static_cast<int>(dtn_.boundary().size());
  if (num_modes < 1 || num_modes > nb) {
    throw DomainError(fmt::format("requested {} modes, boundary has {} vertices", num_modes, nb));
  }
  const Eigen::MatrixXd& l = dtn_.matrix();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(l, mass_block_,
                                                                    Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) {
    throw SolverError("generalized eigensolver did not converge (boundary mass not positive definite?)");
  }

  Spectrum s;
  s.mesh_id = mesh_id_;
  s.boundary_indices.assign(dtn_.boundary().begin(), dtn_.boundary().end());
  s.boundary_modes = solver.eigenvectors().leftCols(num_modes);
  double worst = 0.0;
  for (int k = 0; k < num_modes; ++k) {
    const double sigma = solver.eigenvalues()[k];
    s.eigenvalues.push_back(sigma);
    auto mode = s.boundary_modes.col(k);
    normalize_sign(mode);
    const Eigen::VectorXd m_mode = mass_block_ * mode;
    const double residual = (l * mode - sigma * m_mode).norm() / ((1.0 + std::abs(sigma)) * m_mode.norm());
    worst = std::max(worst, residual);
  }
  if (!(worst < 1e-8)) {
    throw SolverError(fmt::format("eigenpairs not converged: worst relative residual {:.3e}", worst));
  }
  s.extensions = dtn_.extend(s.boundary_modes);
  return s;
}

double SteklovProblem::rayleigh_quotient(const Eigen::VectorXd& u) const {
  if (u.size() != mesh_->vertex_count()) throw DomainError("rayleigh_quotient: dimension mismatch");
  const Eigen::VectorXd ub = dtn_.restrict_to_boundary(u);
  if (ub.cwiseAbs().maxCoeff() == 0.0) throw DomainError("rayleigh_quotient: function vanishes on the boundary");
  return stiffness_.quadratic_form(u) / mass_.quadratic_form(u);
}

Eigen::VectorXd SteklovProblem::coordinate(int axis) const {
  Eigen::VectorXd x(mesh_->vertex_count());
  for (int v = 0; v < mesh_->vertex_count(); ++v) x[v] = mesh_->vertices[v][axis];
  return x;
}

std::array<std::optional<double>, 3> SteklovProblem::coordinate_residual() const {
  for (int v : dtn_.boundary()) {
    const double off = std::abs(mesh_->vertices[v].norm() - 1.0);
    if (off > 1e-8) {
      throw DomainError(fmt::format("boundary vertex {} is off the unit sphere by {:.3e}", v, off));
    }
  }
  std::array<std::optional<double>, 3> out;
  for (int axis = 0; axis < 3; ++axis) {
    const Eigen::VectorXd xb = dtn_.restrict_to_boundary(coordinate(axis));
    if (xb.cwiseAbs().maxCoeff() <= 1e-12) continue;
    const Eigen::VectorXd mx = mass_block_ * xb;
    out[axis] = (dtn_.matrix() * xb - mx).norm() / mx.norm();
  }
  return out;
}

Spectrum steklov_spectrum(const TriangleMesh& mesh, int num_modes) {
  return SteklovProblem(mesh).spectrum(num_modes);
}

double rayleigh_quotient(const TriangleMesh& mesh, const Eigen::VectorXd& u) {
  return SteklovProblem(mesh).rayleigh_quotient(u);
}

std::array<std::optional<double>, 3> coordinate_residual(const TriangleMesh& mesh) {
  return SteklovProblem(mesh).coordinate_residual();
}

double richardson_order(double coarse, double medium, double fine) {
  return std::log2(std::abs(coarse - medium) / std::abs(medium - fine));
}

}  // namespace steklab
