// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "steklab/nodal.hpp"
#include "steklab/orbit.hpp"
#include "steklab/steklov.hpp"
#include "steklab/symmetry.hpp"

using namespace steklab;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// The first nonzero cluster of the critical catenoid at one resolution.
struct CatenoidRun {
  Cluster cluster;
  double seconds = 0.0;
};

CatenoidRun critical_catenoid(Resolution res) {
  const auto start = std::chrono::steady_clock::now();
  const auto sm = build_symmetric_mesh(catalog("critical-catenoid"), res);
  const auto spectrum = steklov_spectrum(sm.mesh, 8);
  const auto cluster = spectrum.first_nonzero_cluster();
  return {cluster.value_or(Cluster{}), seconds_since(start)};
}

Outcome criterion_1() {
  const auto coarse = critical_catenoid({20, 80});
  const auto medium = critical_catenoid({40, 160});
  const auto fine = critical_catenoid({80, 320});
  const double order = richardson_order(coarse.cluster.value, medium.cluster.value, fine.cluster.value);
  const bool ok = std::abs(medium.cluster.value - 1.0) <= 2e-2 && std::abs(fine.cluster.value - 1.0) <= 5e-3 &&
                  medium.cluster.multiplicity == 3 && fine.cluster.multiplicity == 3 && order >= 1.7 && order <= 2.3 &&
                  medium.seconds <= 60.0 && fine.seconds <= 60.0;
  return {ok, fmt::format("sigma1 {:.8f} (x{}) at 40x160 in {:.2f}s, {:.8f} (x{}) at 80x320 in {:.2f}s, order {:.3f}",
                          medium.cluster.value, medium.cluster.multiplicity, medium.seconds, fine.cluster.value,
                          fine.cluster.multiplicity, fine.seconds, order)};
}

Outcome criterion_2() {
  const auto sm = build_symmetric_mesh(catalog("unit-disk"), {32, 128});
  const auto spectrum = steklov_spectrum(sm.mesh, 7);
  const auto expected = oracle::disk_spectrum(7);
  double worst = 0.0;
  for (int i = 0; i < 7; ++i) worst = std::max(worst, std::abs(spectrum.eigenvalues[i] - expected[i]));
  return {worst <= 1e-2, fmt::format("max deviation {:.3e} over 7 eigenvalues", worst)};
}

Outcome criterion_3() {
  const double a = 0.5;
  const auto sm = build_symmetric_mesh(catalog("flat-annulus:0.5"), {32, 128});
  const auto spectrum = steklov_spectrum(sm.mesh, 6);
  const auto expected = oracle::annulus_spectrum(a, 6);
  double worst = 0.0;
  for (int i = 1; i < 6; ++i) worst = std::max(worst, std::abs(spectrum.eigenvalues[i] - expected[i]));
  return {worst <= 1e-2, fmt::format("max deviation {:.3e} over the first 5 nonzero eigenvalues", worst)};
}

Outcome criterion_4() {
  int checked = 0;
  int violations = 0;
  for (const char* name : {"critical-catenoid", "unit-disk", "flat-annulus:0.5"}) {
    const auto sm = build_symmetric_mesh(catalog(name), {40, 160});
    const auto report = courant_check(steklov_spectrum(sm.mesh, 6), sm.mesh);
    checked += report.checked;
    violations += static_cast<int>(report.violations.size());
  }
  return {violations == 0 && checked > 0, fmt::format("{} functions checked, {} violations", checked, violations)};
}

Outcome criterion_5() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<int> counts;
  OrbitPattern pattern;
  for (auto edge : {ArcLabel::Gamma, ArcLabel::E1, ArcLabel::E2, ArcLabel::E3}) {
    pattern.ending_edge = edge;
    counts.push_back(orbit_nodal_count(pattern));
  }
  const double elapsed = seconds_since(start);
  return {counts == std::vector{9, 5, 5, 4} && elapsed < 1.0,
          fmt::format("(gamma, e1, e2, e3) -> ({}) in {:.2e}s", fmt::join(counts, ", "), elapsed)};
}

double worst_residual(const char* surface, Resolution res) {
  const auto sm = build_symmetric_mesh(catalog(surface), res);
  double worst = 0.0;
  for (const auto& r : coordinate_residual(sm.mesh)) worst = std::max(worst, r.value_or(0.0));
  return worst;
}

Outcome criterion_6() {
  const auto sm40 = build_symmetric_mesh(catalog("critical-catenoid"), {40, 160});
  const auto sm80 = build_symmetric_mesh(catalog("critical-catenoid"), {80, 320});
  const auto r40 = coordinate_residual(sm40.mesh);
  const auto r80 = coordinate_residual(sm80.mesh);
  double weakest = 1e300;
  for (int k = 0; k < 3; ++k) weakest = std::min(weakest, r40[k].value_or(0.0) / r80[k].value_or(1.0));
  const double off40 = worst_residual("catenoid:0.8", {40, 160});
  const double off80 = worst_residual("catenoid:0.8", {80, 320});
  return {weakest >= 3.0 && off40 > 0.05 && off80 > 0.05,
          fmt::format("critical residual reduction >= {:.3f}; catenoid:0.8 residual {:.4f}, {:.4f}", weakest, off40,
                      off80)};
}

Outcome criterion_7() {
  double worst = 0.0;
  int pairs = 0;
  for (const char* name : {"critical-catenoid", "unit-disk", "flat-annulus:0.5"}) {
    const auto sm = build_symmetric_mesh(catalog(name), {40, 160});
    SteklovProblem problem(sm.mesh);
    const auto spectrum = problem.spectrum(12);
    const Eigen::MatrixXd& y = spectrum.boundary_modes;
    const Eigen::MatrixXd& m = problem.boundary_mass_block();
    for (int i = 0; i < spectrum.size(); ++i) {
      for (int j = i + 1; j < spectrum.size(); ++j) {
        const double si = spectrum.eigenvalues[i];
        const double sj = spectrum.eigenvalues[j];
        if (std::abs(si - sj) <= 1e-6 * (1.0 + std::abs(sj))) continue;
        const double inner = y.col(i).dot(m * y.col(j));
        const double norms = std::sqrt(y.col(i).dot(m * y.col(i)) * y.col(j).dot(m * y.col(j)));
        worst = std::max(worst, std::abs(inner) / norms);
        ++pairs;
      }
    }
  }
  return {worst < 1e-8, fmt::format("{} pairs, worst relative inner product {:.3e}", pairs, worst)};
}

Outcome criterion_8() {
  const auto sm = build_symmetric_mesh(catalog("critical-catenoid"), {40, 160});
  gen::Source g(0xACCE);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd u = g.vector(sm.mesh.vertex_count());
    const double scale = u.cwiseAbs().maxCoeff();
    auto track = [&](const Eigen::VectorXd& v) { worst = std::max(worst, v.cwiseAbs().maxCoeff() / scale); };
    for (const auto& perm : sm.action.vertex_permutations) {
      const Eigen::VectorXd a = antisymmetrize(u, perm);
      const Eigen::VectorXd s = symmetrize(u, perm);
      track(a + s - u);
      track(antisymmetrize(a, perm) - a);
      track(symmetrize(s, perm) - s);
      track(symmetrize(a, perm));
      track(antisymmetrize(pull_back(u, perm), perm) + a);
    }
  }
  return {worst <= 1e-14, fmt::format("100 vectors x 3 reflections, worst relative entry {:.3e}", worst)};
}

Outcome criterion_9() {
  const auto sm = build_symmetric_mesh(catalog("critical-catenoid"), {40, 160});
  SteklovProblem problem(sm.mesh);
  const auto spectrum = problem.spectrum(8);
  const auto modes = classify(spectrum, problem.boundary_mass_block(), sm.action);
  const auto cluster = spectrum.first_nonzero_cluster();
  constexpr Parity E = Parity::Even;
  constexpr Parity O = Parity::Odd;
  std::vector<std::vector<Parity>> patterns;
  if (cluster) {
    for (int i = cluster->first; i < cluster->first + cluster->multiplicity; ++i) patterns.push_back(modes[i].parity.labels);
  }
  std::sort(patterns.begin(), patterns.end());
  std::vector<std::vector<Parity>> expected{{O, E, E}, {E, O, E}, {E, E, O}};
  std::sort(expected.begin(), expected.end());
  const bool ok = modes[0].parity.all_even() && patterns == expected;
  std::vector<std::string> names;
  for (const auto& p : patterns) {
    std::string s;
    for (Parity q : p) s += q == E ? 'E' : q == O ? 'O' : 'M';
    names.push_back(s);
  }
  return {ok, fmt::format("sigma0 all-even: {}; sigma1 patterns {}", modes[0].parity.all_even(), fmt::join(names, " "))};
}

Outcome criterion_10() {
  const double rho0 = solve_rho0();
  const double target = 4.0 * std::numbers::pi / rho0;
  // The default sweep grid 0.8:1.6 in 17 steps; take the sample nearest rho0.
  double nearest = 0.8;
  for (int k = 0; k < 17; ++k) {
    const double rho = 0.8 + 0.8 * k / 16;
    if (std::abs(rho - rho0) < std::abs(nearest - rho0)) nearest = rho;
  }
  const auto sm = build_symmetric_mesh(catalog(fmt::format("catenoid:{:.17g}", nearest)), {40, 160});
  const auto cluster = steklov_spectrum(sm.mesh, 8).first_nonzero_cluster();
  const double product = cluster ? cluster->value * boundary_length(sm.mesh) : 0.0;
  const double deviation = std::abs(product - target) / target;
  return {deviation <= 0.02,
          fmt::format("rho {:.3f}: sigma1 |boundary| = {:.5f}, 4 pi / rho0 = {:.5f}, deviation {:.3e}", nearest, product,
                      target, deviation)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"critical catenoid sigma1 = 1", criterion_1},
      {"unit disk oracle", criterion_2},
      {"flat annulus oracle", criterion_3},
      {"first cluster has two nodal domains", criterion_4},
      {"orbit counts (9, 5, 5, 4)", criterion_5},
      {"free-boundary residuals", criterion_6},
      {"eigenpair orthogonality", criterion_7},
      {"symmetrization algebra", criterion_8},
      {"parity classification", criterion_9},
      {"sweep anchor 4 pi / rho0", criterion_10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, fmt::format("exception: {}", e.what())};
    }
    failures += outcome.passed ? 0 : 1;
    fmt::print("{} {:>2} {}: {}\n", outcome.passed ? "PASS" : "FAIL", i + 1, criteria[i].first, outcome.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
