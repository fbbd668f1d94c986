#include "steklab/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "steklab/error.hpp"

namespace steklab {

namespace {

void check_perm(const Eigen::VectorXd& u, std::span<const int> perm) {
  if (static_cast<std::size_t>(u.size()) != perm.size()) {
    throw DomainError(fmt::format("function of size {} paired with a permutation of size {}", u.size(), perm.size()));
  }
}

// Columns of w pulled back by a slot permutation.
Eigen::MatrixXd pull_back_columns(const Eigen::MatrixXd& w, std::span<const int> perm) {
  Eigen::MatrixXd out(w.rows(), w.cols());
  for (Eigen::Index r = 0; r < w.rows(); ++r) out.row(r) = w.row(perm[r]);
  return out;
}

struct Subspace {
  Eigen::MatrixXd coeffs;  // cluster-basis coordinates, orthonormal columns
  bool split_ok = true;
};

}  // namespace

std::string_view to_string(Parity parity) {
  switch (parity) {
    case Parity::Even:
      return "even";
    case Parity::Odd:
      return "odd";
    case Parity::Mixed:
      return "mixed";
  }
  return "?";
}

bool ParityVector::all_even() const {
  return std::all_of(labels.begin(), labels.end(), [](Parity p) { return p == Parity::Even; });
}

Eigen::VectorXd pull_back(const Eigen::VectorXd& u, std::span<const int> perm) {
  check_perm(u, perm);
  Eigen::VectorXd out(u.size());
  for (Eigen::Index v = 0; v < u.size(); ++v) out[v] = u[perm[v]];
  return out;
}

Eigen::VectorXd antisymmetrize(const Eigen::VectorXd& u, std::span<const int> perm) {
  return 0.5 * (u - pull_back(u, perm));
}

Eigen::VectorXd symmetrize(const Eigen::VectorXd& u, std::span<const int> perm) {
  return 0.5 * (u + pull_back(u, perm));
}

ParityVector parity_of(const Eigen::VectorXd& u, const GroupAction& action, double tol) {
  ParityVector pv;
  pv.tolerance = tol;
  const double norm = u.norm();
  for (const auto& perm : action.vertex_permutations) {
    if (antisymmetrize(u, perm).norm() <= tol * norm) {
      pv.labels.push_back(Parity::Even);
    } else if (symmetrize(u, perm).norm() <= tol * norm) {
      pv.labels.push_back(Parity::Odd);
    } else {
      pv.labels.push_back(Parity::Mixed);
    }
  }
  return pv;
}

std::vector<int> boundary_permutation(std::span<const int> boundary, std::span<const int> vertex_perm) {
  std::vector<int> slot(vertex_perm.size(), -1);
  for (std::size_t b = 0; b < boundary.size(); ++b) slot[boundary[b]] = static_cast<int>(b);
  std::vector<int> out(boundary.size());
  for (std::size_t b = 0; b < boundary.size(); ++b) {
    const int image = slot[vertex_perm[boundary[b]]];
    if (image < 0) throw DomainError("vertex permutation does not preserve the boundary");
    out[b] = image;
  }
  return out;
}

std::vector<ModeParity> classify(const Spectrum& spectrum, const Eigen::MatrixXd& boundary_mass,
                                 const GroupAction& action, double tol, double cluster_tol) {
  if (spectrum.extensions.rows() == 0 ||
      static_cast<std::size_t>(spectrum.extensions.rows()) != action.vertex_permutations.front().size()) {
    throw DomainError("classify: spectrum and group action come from different meshes");
  }
  std::vector<std::vector<int>> bperm;
  for (const auto& perm : action.vertex_permutations) {
    bperm.push_back(boundary_permutation(spectrum.boundary_indices, perm));
  }

  std::vector<ModeParity> out;
  for (const Cluster& cluster : spectrum.clusters(cluster_tol)) {
    const int k = cluster.multiplicity;
    const Eigen::MatrixXd basis = spectrum.boundary_modes.middleCols(cluster.first, k);
    const Eigen::MatrixXd ext = spectrum.extensions.middleCols(cluster.first, k);
    Eigen::VectorXd sigmas(k);
    for (int i = 0; i < k; ++i) sigmas[i] = spectrum.eigenvalues[cluster.first + i];

    std::vector<Subspace> parts{{Eigen::MatrixXd::Identity(k, k), true}};
    for (const auto& perm : bperm) {
      std::vector<Subspace> next;
      for (const Subspace& part : parts) {
        const Eigen::MatrixXd w = basis * part.coeffs;
        Eigen::MatrixXd q = w.transpose() * boundary_mass * pull_back_columns(w, perm);
        q = 0.5 * (q + q.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
        bool ok = part.split_ok;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
          ok = ok && std::abs(std::abs(es.eigenvalues()[i]) - 1.0) <= 1e-6;
        }
        Eigen::MatrixXd plus(k, 0);
        Eigen::MatrixXd minus(k, 0);
        for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
          const Eigen::VectorXd c = part.coeffs * es.eigenvectors().col(i);
          Eigen::MatrixXd& side = es.eigenvalues()[i] > 0.0 ? plus : minus;
          side.conservativeResize(Eigen::NoChange, side.cols() + 1);
          side.col(side.cols() - 1) = c;
        }
        // Odd parts first, so degenerate coordinate modes come out as x1, x2, x3.
        if (minus.cols() > 0) next.push_back({minus, ok});
        if (plus.cols() > 0) next.push_back({plus, ok});
      }
      parts = std::move(next);
    }

    for (const Subspace& part : parts) {
      // Rotate to eigenvectors of the pencil restricted to the parity class.
      const Eigen::MatrixXd rayleigh = part.coeffs.transpose() * sigmas.asDiagonal() * part.coeffs;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (rayleigh + rayleigh.transpose()));
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const Eigen::VectorXd c = part.coeffs * es.eigenvectors().col(i);
        ModeParity mp;
        mp.eigenvalue = es.eigenvalues()[i];
        mp.boundary_mode = basis * c;
        mp.extension = ext * c;
        const double peak_before = mp.boundary_mode.cwiseAbs().maxCoeff();
        Eigen::VectorXd signed_mode = mp.boundary_mode;
        normalize_sign(signed_mode);
        if (peak_before > 0.0 && signed_mode.dot(mp.boundary_mode) < 0.0) {
          mp.boundary_mode = -mp.boundary_mode;
          mp.extension = -mp.extension;
        }
        mp.parity = parity_of(mp.extension, action, tol);
        mp.split_ok = part.split_ok;
        out.push_back(std::move(mp));
      }
    }
    // Ascending within the cluster; values equal to 1e-9 keep the split order.
    auto key = [](const ModeParity& m) { return std::llround(m.eigenvalue * 1e9); };
    std::stable_sort(out.end() - k, out.end(),
                     [&](const ModeParity& a, const ModeParity& b) { return key(a) < key(b); });
    for (int i = 0; i < k; ++i) out[out.size() - k + i].index = cluster.first + i;
  }
  return out;
}

CoordinateOrthogonality eigenfunction_orthogonal_to_coordinates(const SteklovProblem& problem,
                                                                const Eigen::VectorXd& boundary_mode,
                                                                double sigma) {
  if (std::abs(sigma - 1.0) <= 1e-6) {
    throw DomainError(fmt::format("eigenvalue {} lies in the eigenvalue-1 cluster; orthogonality test inapplicable",
                                  sigma));
  }
  const Eigen::MatrixXd& m = problem.boundary_mass_block();
  const Eigen::MatrixXd& l = problem.dtn().matrix();
  if (boundary_mode.size() != m.rows()) throw DomainError("boundary mode has the wrong size");
  const double u_norm = std::sqrt(boundary_mode.dot(m * boundary_mode));

  CoordinateOrthogonality out;
  for (int axis = 0; axis < 3; ++axis) {
    const Eigen::VectorXd x = problem.dtn().restrict_to_boundary(problem.coordinate(axis));
    if (x.cwiseAbs().maxCoeff() <= 1e-12) continue;
    const Eigen::VectorXd mx = m * x;
    const double scale = u_norm * std::sqrt(x.dot(mx));
    const double inner = boundary_mode.dot(mx);
    const Eigen::VectorXd residual = l * x - mx;
    out.relative_inner[axis] = inner / scale;
    out.adjoint_defect[axis] = std::abs((sigma - 1.0) * inner - boundary_mode.dot(residual)) / scale;
  }
  return out;
}

CoordinateOrthogonality eigenfunction_orthogonal_to_coordinates(const SteklovProblem& problem,
                                                                const Spectrum& spectrum, int mode) {
  if (mode < 0 || mode >= spectrum.size()) throw DomainError(fmt::format("mode {} out of range", mode));
  return eigenfunction_orthogonal_to_coordinates(problem, spectrum.boundary_modes.col(mode),
                                                 spectrum.eigenvalues[mode]);
}

}  // namespace steklab
