#pragma once

#include <string>
#include <string_view>

#include "steklab/mesh.hpp"
#include "steklab/nodal.hpp"
#include "steklab/steklov.hpp"

namespace steklab::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kMeshError = 2, kSolverError = 3, kChecksFailed = 4 };

struct RunConfig {
  std::string surface;
  Resolution resolution{40, 160};
  int modes = 8;
  double tol_eigen = kDefaultClusterTolerance;
  double tol_parity = 1e-6;
  double tol_residual = 1e-2;
  double nodal_tau = kDefaultNodalTau;
  std::string out;
  std::string format = "json";
  std::string export_mesh;
};

/// "40x160" -> {40, 160}. Throws DomainError.
Resolution parse_resolution(std::string_view text);

/// Throws DomainError for an empty surface, non-positive tolerances or mode
/// count, or an unknown format.
void validate(const RunConfig& config);

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& error);

std::string spectrum_report(const RunConfig& config);

struct VerifyResult {
  std::string report;
  bool passed = false;
};
VerifyResult verify_report(const RunConfig& config);

struct SweepConfig {
  double rho_min = 0.8;
  double rho_max = 1.6;
  int steps = 17;
};
/// "a:b" -> (a, b). Throws DomainError.
std::pair<double, double> parse_range(std::string_view text);
std::string sweep_report(const RunConfig& config, const SweepConfig& sweep);

/// Orbit nodal count for an ending edge name ("gamma", "e1", ...).
int orbit_count(std::string_view ending_edge);

/// Nodal report of one mode (index into the parity-resolved spectrum).
std::string nodal_report(const RunConfig& config, int mode);

/// Writes <prefix>.off|.obj, <prefix>.domain.json, <prefix>.stiffness.mtx and
/// <prefix>.mass.mtx; returns the list of written paths, one per line.
std::string export_files(const RunConfig& config, const std::string& prefix);

}  // namespace steklab::cli
