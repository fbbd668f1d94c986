#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "steklab/error.hpp"
#include "steklab/symmetry.hpp"

using namespace steklab;

namespace {

constexpr Parity E = Parity::Even;
constexpr Parity O = Parity::Odd;

std::vector<Parity> labels(const ModeParity& m) { return m.parity.labels; }

// Parity pattern of the coordinate x_(axis+1) under the generators.
std::vector<Parity> coordinate_pattern(int axis, int generators) {
  std::vector<Parity> out(generators, E);
  if (axis < generators) out[axis] = O;
  return out;
}

}  // namespace

TEST_CASE("property: symmetrizer and antisymmetrizer algebra") {
  const auto sm = build_symmetric_mesh(catalog("critical-catenoid"), {6, 24});
  gen::Source g(51);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd u = g.vector(sm.mesh.vertex_count());
    const double bound = 1e-14 * u.cwiseAbs().maxCoeff();
    auto small = [&](const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff() <= bound; };
    for (const auto& perm : sm.action.vertex_permutations) {
      const Eigen::VectorXd a = antisymmetrize(u, perm);
      const Eigen::VectorXd s = symmetrize(u, perm);
      REQUIRE(small(a + s - u));
      REQUIRE(small(antisymmetrize(a, perm) - a));
      REQUIRE(small(symmetrize(s, perm) - s));
      REQUIRE(small(symmetrize(a, perm)));
      REQUIRE(small(antisymmetrize(s, perm)));
      REQUIRE(small(antisymmetrize(pull_back(u, perm), perm) + a));
      REQUIRE((pull_back(pull_back(u, perm), perm) - u).norm() == 0.0);
    }
  }
}

TEST_CASE("coordinate parities") {
  const auto sm = build_symmetric_mesh(catalog("critical-catenoid"), {8, 32});
  for (int axis = 0; axis < 3; ++axis) {
    Eigen::VectorXd x(sm.mesh.vertex_count());
    for (int v = 0; v < sm.mesh.vertex_count(); ++v) x[v] = sm.mesh.vertices[v][axis];
    CHECK(parity_of(x, sm.action, 1e-12).labels == coordinate_pattern(axis, 3));
    // A u is u itself for the reflection that flips x.
    CHECK((antisymmetrize(x, sm.action.vertex_permutations[axis]) - x).norm() == 0.0);
  }
  GroupAction identity = sm.action;
  for (auto& perm : identity.vertex_permutations) {
    for (int v = 0; v < static_cast<int>(perm.size()); ++v) perm[v] = v;
  }
  gen::Source g(52);
  CHECK(parity_of(g.vector(sm.mesh.vertex_count()), identity, 1e-12).all_even());

  Eigen::VectorXd mixed = Eigen::VectorXd::Zero(sm.mesh.vertex_count());
  mixed[1] = 1.0;
  CHECK(parity_of(mixed, sm.action, 1e-6).labels[0] == Parity::Mixed);
  CHECK_THROWS_AS(pull_back(Eigen::VectorXd::Ones(3), sm.action.vertex_permutations[0]), DomainError);
}

TEST_CASE("catenoid modes split into pure parity classes") {
  const auto sm = build_symmetric_mesh(catalog("critical-catenoid"), {16, 64});
  SteklovProblem problem(sm.mesh);
  const auto spectrum = problem.spectrum(12);
  const auto modes = classify(spectrum, problem.boundary_mass_block(), sm.action);
  REQUIRE(modes.size() == 12);
  CHECK(labels(modes[0]) == std::vector{E, E, E});
  CHECK(modes[0].parity.all_even());
  CHECK(labels(modes[1]) == std::vector{O, E, E});
  CHECK(labels(modes[2]) == std::vector{E, O, E});
  CHECK(labels(modes[3]) == std::vector{E, E, O});

  // Every mode of a complete cluster has a definite parity.
  const auto clusters = spectrum.clusters();
  for (const auto& c : clusters) {
    if (c.first + c.multiplicity >= spectrum.size()) continue;
    for (int i = c.first; i < c.first + c.multiplicity; ++i) {
      CAPTURE(i);
      CHECK(modes[i].split_ok);
      for (Parity p : modes[i].parity.labels) CHECK(p != Parity::Mixed);
    }
  }
  for (std::size_t i = 0; i < modes.size(); ++i) CHECK(modes[i].index == static_cast<int>(i));

  // Away from sigma_0 the spectrum stays above the coordinate cluster.
  for (int i = 1; i < spectrum.size(); ++i) CHECK(spectrum.eigenvalues[i] > 0.95);
}

TEST_CASE("disk modes split into pure parity classes") {
  const auto sm = build_symmetric_mesh(catalog("unit-disk"), {16, 64});
  SteklovProblem problem(sm.mesh);
  const auto spectrum = problem.spectrum(6);
  const auto modes = classify(spectrum, problem.boundary_mass_block(), sm.action);
  REQUIRE(sm.action.generator_count() == 2);
  CHECK(labels(modes[0]) == std::vector{E, E});
  CHECK(labels(modes[1]) == std::vector{O, E});
  CHECK(labels(modes[2]) == std::vector{E, O});
  // x^2 - y^2 and xy at sigma = 2.
  std::vector<std::vector<Parity>> second{labels(modes[3]), labels(modes[4])};
  std::sort(second.begin(), second.end());
  CHECK(second == std::vector<std::vector<Parity>>{{E, E}, {O, O}});
}

TEST_CASE("symmetrized eigenvectors remain eigenvectors") {
  const auto sm = build_symmetric_mesh(catalog("critical-catenoid"), {12, 48});
  SteklovProblem problem(sm.mesh);
  const auto spectrum = problem.spectrum(8);
  const auto& l = problem.dtn().matrix();
  const auto& m = problem.boundary_mass_block();
  // Only clusters forced by exact symmetry are invariant under every reflection.
  const auto exact = spectrum.clusters(kExactClusterTolerance);
  for (const auto& c : exact) {
    if (c.first + c.multiplicity >= spectrum.size()) continue;
    for (int i = c.first; i < c.first + c.multiplicity; ++i) {
      const Eigen::VectorXd u = spectrum.extensions.col(i);
      for (const auto& perm : sm.action.vertex_permutations) {
        for (const Eigen::VectorXd& w : {antisymmetrize(u, perm), symmetrize(u, perm)}) {
          const Eigen::VectorXd y = problem.dtn().restrict_to_boundary(w);
          if (y.norm() < 1e-8 * u.norm()) continue;
          const double residual = (l * y - spectrum.eigenvalues[i] * (m * y)).norm() / (m * y).norm();
          CHECK(residual < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("parity forces orthogonality to coordinate functions") {
  const auto sm = build_symmetric_mesh(catalog("critical-catenoid"), {16, 64});
  SteklovProblem problem(sm.mesh);
  const auto spectrum = problem.spectrum(8);
  const auto modes = classify(spectrum, problem.boundary_mass_block(), sm.action);

  const auto first = eigenfunction_orthogonal_to_coordinates(problem, spectrum, 0);
  for (int axis = 0; axis < 3; ++axis) {
    CHECK(std::abs(first.relative_inner[axis]) < 1e-10);
    CHECK(first.adjoint_defect[axis] < 1e-10);
  }

  for (int i = 4; i < 6; ++i) {
    const auto report = eigenfunction_orthogonal_to_coordinates(problem, modes[i].boundary_mode, modes[i].eigenvalue);
    for (int axis = 0; axis < 3; ++axis) {
      CAPTURE(i);
      CAPTURE(axis);
      if (labels(modes[i]) != coordinate_pattern(axis, 3)) CHECK(std::abs(report.relative_inner[axis]) < 1e-10);
      CHECK(report.adjoint_defect[axis] < 1e-8);
    }
  }

  CHECK_THROWS_AS(eigenfunction_orthogonal_to_coordinates(problem, modes[1].boundary_mode, 1.0), DomainError);
  CHECK_THROWS_AS(eigenfunction_orthogonal_to_coordinates(problem, spectrum, 8), DomainError);
  CHECK_THROWS_AS(eigenfunction_orthogonal_to_coordinates(problem, Eigen::VectorXd::Ones(3), 2.0), DomainError);
}

TEST_CASE("disk sigma = 2 modes are orthogonal to x and y") {
  const auto sm = build_symmetric_mesh(catalog("unit-disk"), {16, 64});
  SteklovProblem problem(sm.mesh);
  const auto spectrum = problem.spectrum(6);
  const auto modes = classify(spectrum, problem.boundary_mass_block(), sm.action);
  for (int i = 3; i < 5; ++i) {
    const auto report = eigenfunction_orthogonal_to_coordinates(problem, modes[i].boundary_mode, modes[i].eigenvalue);
    CHECK(std::abs(report.relative_inner[0]) < 1e-10);
    CHECK(std::abs(report.relative_inner[1]) < 1e-10);
    CHECK(report.relative_inner[2] == 0.0);
  }
}

TEST_CASE("classify rejects a spectrum from another mesh") {
  const auto a = build_symmetric_mesh(catalog("unit-disk"), {4, 16});
  const auto b = build_symmetric_mesh(catalog("unit-disk"), {6, 24});
  SteklovProblem problem(a.mesh);
  const auto spectrum = problem.spectrum(3);
  CHECK_THROWS_AS(classify(spectrum, problem.boundary_mass_block(), b.action), DomainError);
}

TEST_CASE("boundary permutation follows the vertex permutation") {
  const auto sm = build_symmetric_mesh(catalog("flat-annulus:0.5"), {4, 16});
  const auto boundary = sm.mesh.boundary_vertices();
  for (const auto& perm : sm.action.vertex_permutations) {
    const auto bp = boundary_permutation(boundary, perm);
    for (std::size_t i = 0; i < boundary.size(); ++i) CHECK(boundary[bp[i]] == perm[boundary[i]]);
  }
  CHECK(to_string(Parity::Odd) == "odd");
}
