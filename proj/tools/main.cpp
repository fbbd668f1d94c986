#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "steklab/error.hpp"

namespace {

using namespace steklab::cli;

struct Options {
  RunConfig config;
  std::string resolution;
  std::string rho_range = "0.8:1.6";
  int steps = 17;
  std::string edge;
  int mode = 1;
};

void add_common(CLI::App* cmd, Options& o, bool needs_surface) {
  auto* surface = cmd->add_option("--surface", o.config.surface,
                                  "critical-catenoid, unit-disk, catenoid:<rho>, flat-annulus:<inner radius>");
  if (needs_surface) surface->required();
  cmd->add_option("--res", o.resolution, "axial x angular segments, e.g. 40x160");
  cmd->add_option("--modes", o.config.modes, "number of eigenpairs");
  cmd->add_option("--tol-eigen", o.config.tol_eigen, "relative eigenvalue clustering tolerance");
  cmd->add_option("--tol-parity", o.config.tol_parity, "parity classification tolerance");
  cmd->add_option("--tol-residual", o.config.tol_residual, "free-boundary residual tolerance");
  cmd->add_option("--nodal-tau", o.config.nodal_tau, "zero threshold relative to max|u|");
  cmd->add_option("--out", o.config.out, "output path (report, or prefix for export)");
  cmd->add_option("--format", o.config.format, "json or csv");
  cmd->add_option("--export-mesh", o.config.export_mesh, "off or obj");
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw steklab::DomainError("cannot write '" + path + "'");
  file << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steklov eigenvalues of free boundary minimal surfaces"};
  app.require_subcommand(1);
  Options o;

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues, clusters, residuals and parities");
  add_common(spectrum, o, true);
  auto* verify = app.add_subcommand("verify", "free-boundary, Courant, parity and orthogonality checks");
  add_common(verify, o, true);
  auto* sweep = app.add_subcommand("sweep", "first eigenvalue along the catenoid family");
  add_common(sweep, o, false);
  sweep->add_option("--rho-range", o.rho_range, "a:b inside (0.2, 2.5)");
  sweep->add_option("--steps", o.steps, "number of rho samples, at least 2");
  auto* orbit = app.add_subcommand("orbit-count", "nodal domains of the reflected nodal arc");
  orbit->add_option("edge", o.edge, "ending edge: gamma, e1, e2 or e3")->required();
  auto* nodal = app.add_subcommand("nodal", "nodal domains and nodal line endpoints of one mode");
  add_common(nodal, o, true);
  nodal->add_option("--mode", o.mode, "mode index in the ascending spectrum");
  auto* exporter = app.add_subcommand("export", "mesh, fundamental-domain sidecar and matrices");
  add_common(exporter, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (!o.resolution.empty()) o.config.resolution = parse_resolution(o.resolution);
    if (*spectrum) {
      emit(spectrum_report(o.config), o.config.out);
    } else if (*verify) {
      const auto result = verify_report(o.config);
      emit(result.report, o.config.out);
      return result.passed ? kOk : kChecksFailed;
    } else if (*sweep) {
      const auto [lo, hi] = parse_range(o.rho_range);
      emit(sweep_report(o.config, {lo, hi, o.steps}), o.config.out);
    } else if (*orbit) {
      std::cout << orbit_count(o.edge) << '\n';
    } else if (*nodal) {
      emit(nodal_report(o.config, o.mode), o.config.out);
    } else if (*exporter) {
      std::cout << export_files(o.config, o.config.out);
    }
  } catch (const std::exception& e) {
    std::cerr << "steklab: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kOk;
}
