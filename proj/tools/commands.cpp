#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "steklab/error.hpp"
#include "steklab/io.hpp"
#include "steklab/orbit.hpp"
#include "steklab/surfaces.hpp"
#include "steklab/symmetry.hpp"

namespace steklab::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kCrossProductTolerance = 1e-8;
constexpr double kGapTolerance = 1e-6;

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw DomainError(fmt::format("invalid {} '{}'", what, text));
  return value;
}

// Mesh and assembled operators; the problem keeps a pointer into the mesh, so
// sessions live behind a unique_ptr.
struct Session {
  SymmetricMesh symmetric;
  SteklovProblem problem;

  Session(const ParametricSurface& surface, Resolution res)
      : symmetric(build_symmetric_mesh(surface, res)),
        problem(symmetric.mesh, fmt::format("{}@{}x{}", surface.name(), res.axial, res.angular)) {}
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const TriangleMesh& mesh() const { return symmetric.mesh; }
  int boundary_size() const { return static_cast<int>(problem.dtn().boundary().size()); }
  Spectrum spectrum(int modes) const { return problem.spectrum(std::min(modes, boundary_size())); }
};

std::unique_ptr<Session> open_session(const RunConfig& config) {
  validate(config);
  return std::make_unique<Session>(catalog(config.surface), config.resolution);
}

std::string axis_name(const SymmetryPlane& plane) { return fmt::format("x{}", plane.axis + 1); }

Json residual_json(const SteklovProblem& problem) {
  std::array<std::optional<double>, 3> residuals;
  try {
    residuals = problem.coordinate_residual();
  } catch (const DomainError&) {
    return nullptr;
  }
  Json j = Json::object();
  for (int axis = 0; axis < 3; ++axis) {
    const std::string key = fmt::format("x{}", axis + 1);
    if (residuals[axis]) {
      j[key] = *residuals[axis];
    } else {
      j[key] = nullptr;
    }
  }
  return j;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream file(path);
  if (!file) throw DomainError(fmt::format("cannot write '{}'", path.string()));
  return file;
}

void write_mesh(const TriangleMesh& mesh, const std::string& format, const std::filesystem::path& path) {
  auto file = open_output(path);
  if (format == "obj") {
    write_obj(file, mesh);
  } else {
    write_off(file, mesh);
  }
}

// Parity pattern of the coordinate x_(axis+1): odd under its own plane only.
ParityVector coordinate_parity(const GroupAction& action, int axis) {
  ParityVector pv;
  for (const auto& plane : action.generators) pv.labels.push_back(plane.axis == axis ? Parity::Odd : Parity::Even);
  return pv;
}

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

Check free_boundary_check(const SteklovProblem& problem, double tol) {
  Check c{"free-boundary", true, {}};
  std::array<std::optional<double>, 3> residuals;
  try {
    residuals = problem.coordinate_residual();
  } catch (const DomainError& e) {
    return {c.name, false, e.what()};
  }
  std::vector<std::string> parts;
  for (int axis = 0; axis < 3; ++axis) {
    if (!residuals[axis]) {
      parts.push_back(fmt::format("x{} skipped (vanishes on the boundary)", axis + 1));
      continue;
    }
    c.passed = c.passed && *residuals[axis] <= tol;
    parts.push_back(fmt::format("x{} {:.3e}", axis + 1, *residuals[axis]));
  }
  c.detail = fmt::format("{}; tolerance {:.1e}", fmt::join(parts, ", "), tol);
  return c;
}

Check courant(const Spectrum& spectrum, const TriangleMesh& mesh, const RunConfig& config) {
  const auto report = courant_check(spectrum, mesh, config.nodal_tau, 8, config.tol_eigen);
  std::string detail = fmt::format("sigma1 cluster {:.6f} x{}, {} functions, {} violations", report.cluster_value,
                                   report.multiplicity, report.checked, report.violations.size());
  for (const auto& v : report.violations) detail += fmt::format("; {} domains", v.domain_count);
  return {"courant", report.passed(), detail};
}

Check parity_check(const std::vector<ModeParity>& modes, const Spectrum& spectrum, int requested, double cluster_tol) {
  const auto clusters = spectrum.clusters(cluster_tol);
  bool ok = !modes.empty() && modes.front().parity.all_even() && clusters.front().multiplicity == 1;
  std::string detail = ok ? "sigma0 all-even" : "sigma0 not all-even";
  int judged = 0;
  for (const auto& cl : clusters) {
    // Clusters running into the end of the computed spectrum may be truncated.
    if (cl.first >= requested || cl.first + cl.multiplicity >= spectrum.size()) continue;
    for (int i = cl.first; i < cl.first + cl.multiplicity; ++i) {
      const auto& m = modes[i];
      const bool mixed = std::any_of(m.parity.labels.begin(), m.parity.labels.end(),
                                     [](Parity p) { return p == Parity::Mixed; });
      if (mixed || !m.split_ok) {
        ok = false;
        detail += fmt::format("; mode {} ({:.6f}) has mixed parity", i, m.eigenvalue);
      }
      ++judged;
    }
  }
  detail += fmt::format("; {} modes classified", judged);
  return {"parity", ok, detail};
}

Check orthogonality_check(const SteklovProblem& problem, const Spectrum& spectrum,
                          const std::vector<ModeParity>& modes, const GroupAction& action) {
  const Eigen::MatrixXd& m = problem.boundary_mass_block();
  const Eigen::MatrixXd gram = spectrum.boundary_modes.transpose() * m * spectrum.boundary_modes;
  double worst_cross = 0.0;
  for (int i = 0; i < spectrum.size(); ++i) {
    for (int j = i + 1; j < spectrum.size(); ++j) {
      if (std::abs(spectrum.eigenvalues[i] - spectrum.eigenvalues[j]) <= kGapTolerance) continue;
      worst_cross = std::max(worst_cross, std::abs(gram(i, j)) / std::sqrt(gram(i, i) * gram(j, j)));
    }
  }
  double worst_defect = 0.0;
  double worst_forced = 0.0;
  for (const auto& mode : modes) {
    if (std::abs(mode.eigenvalue - 1.0) <= kGapTolerance) continue;
    const auto orth = eigenfunction_orthogonal_to_coordinates(problem, mode.boundary_mode, mode.eigenvalue);
    for (int axis = 0; axis < 3; ++axis) {
      worst_defect = std::max(worst_defect, orth.adjoint_defect[axis]);
      const bool has_axis = std::any_of(action.generators.begin(), action.generators.end(),
                                        [&](const SymmetryPlane& p) { return p.axis == axis; });
      const auto& labels = mode.parity.labels;
      const bool resolved = std::none_of(labels.begin(), labels.end(), [](Parity p) { return p == Parity::Mixed; });
      if (has_axis && resolved && !(mode.parity == coordinate_parity(action, axis))) {
        worst_forced = std::max(worst_forced, std::abs(orth.relative_inner[axis]));
      }
    }
  }
  const bool ok = worst_cross < kCrossProductTolerance && worst_defect < kCrossProductTolerance &&
                  worst_forced < kCrossProductTolerance;
  return {"orthogonality", ok,
          fmt::format("eigenpair cross products {:.3e}, coordinate adjoint defect {:.3e}, parity-forced coordinate "
                      "products {:.3e}; tolerance {:.0e}",
                      worst_cross, worst_defect, worst_forced, kCrossProductTolerance)};
}

}  // namespace

Resolution parse_resolution(std::string_view text) {
  const auto x = text.find('x');
  if (x == std::string_view::npos) throw DomainError(fmt::format("resolution '{}' is not of the form WxH", text));
  Resolution r;
  auto parse_int = [&](std::string_view part, int& out) {
    const auto* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, out);
    if (ec != std::errc{} || ptr != end || part.empty() || out <= 0) {
      throw DomainError(fmt::format("resolution '{}' is not of the form WxH", text));
    }
  };
  parse_int(text.substr(0, x), r.axial);
  parse_int(text.substr(x + 1), r.angular);
  return r;
}

std::pair<double, double> parse_range(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw DomainError(fmt::format("range '{}' is not of the form a:b", text));
  return {parse_double(text.substr(0, colon), "range start"), parse_double(text.substr(colon + 1), "range end")};
}

void validate(const RunConfig& config) {
  if (config.surface.empty()) throw DomainError("no surface given");
  if (config.modes < 1) throw DomainError(fmt::format("--modes must be positive, got {}", config.modes));
  for (auto [name, value] : {std::pair{"--tol-eigen", config.tol_eigen}, std::pair{"--tol-parity", config.tol_parity},
                             std::pair{"--tol-residual", config.tol_residual}, std::pair{"--nodal-tau", config.nodal_tau}}) {
    if (!(value > 0.0)) throw DomainError(fmt::format("{} must be positive, got {}", name, value));
  }
  if (config.format != "json" && config.format != "csv") {
    throw DomainError(fmt::format("--format must be json or csv, got '{}'", config.format));
  }
  if (!config.export_mesh.empty() && config.export_mesh != "off" && config.export_mesh != "obj") {
    throw DomainError(fmt::format("--export-mesh must be off or obj, got '{}'", config.export_mesh));
  }
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const DomainError*>(&error) != nullptr) return kConfigError;
  if (dynamic_cast<const MeshError*>(&error) != nullptr) return kMeshError;
  if (dynamic_cast<const SolverError*>(&error) != nullptr) return kSolverError;
  if (dynamic_cast<const Error*>(&error) != nullptr) return kConfigError;
  return kSolverError;
}

std::string spectrum_report(const RunConfig& config) {
  if (!config.export_mesh.empty() && config.out.empty()) throw DomainError("--export-mesh requires --out");
  const auto session = open_session(config);
  const Spectrum spectrum = session->spectrum(config.modes);
  const auto modes = classify(spectrum, session->problem.boundary_mass_block(), session->symmetric.action,
                              config.tol_parity, config.tol_eigen);

  if (!config.export_mesh.empty()) {
    const std::filesystem::path stem = std::filesystem::path(config.out).replace_extension();
    write_mesh(session->mesh(), config.export_mesh, fmt::format("{}.{}", stem.string(), config.export_mesh));
    for (const auto& m : modes) {
      auto file = open_output(fmt::format("{}.mode{}.txt", stem.string(), m.index));
      write_vertex_scalars(file, m.extension);
    }
  }

  const auto& generators = session->symmetric.action.generators;
  if (config.format == "csv") {
    std::string out = "mode,eigenvalue";
    for (const auto& g : generators) out += ",parity_" + axis_name(g);
    out += '\n';
    for (const auto& m : modes) {
      out += fmt::format("{},{:.17g}", m.index, m.eigenvalue);
      for (Parity p : m.parity.labels) out += fmt::format(",{}", to_string(p));
      out += '\n';
    }
    return out;
  }

  Json j;
  j["schema"] = 1;
  j["surface"] = config.surface;
  j["resolution"] = {config.resolution.axial, config.resolution.angular};
  j["modes"] = spectrum.size();
  j["eigenvalues"] = spectrum.eigenvalues;
  auto clusters = Json::array();
  for (const auto& c : spectrum.clusters(config.tol_eigen)) {
    clusters.push_back({{"value", c.value}, {"multiplicity", c.multiplicity}, {"first", c.first}});
  }
  j["clusters"] = std::move(clusters);
  j["residuals"] = residual_json(session->problem);
  auto rayleigh = Json::array();
  for (int i = 0; i < spectrum.size(); ++i) {
    rayleigh.push_back({{"mode", i},
                        {"eigenvalue", spectrum.eigenvalues[i]},
                        {"quotient", session->problem.rayleigh_quotient(spectrum.extensions.col(i))}});
  }
  j["rayleigh"] = std::move(rayleigh);
  auto parities = Json::array();
  for (const auto& m : modes) {
    Json labels = Json::object();
    for (std::size_t g = 0; g < generators.size(); ++g) labels[axis_name(generators[g])] = to_string(m.parity.labels[g]);
    parities.push_back({{"mode", m.index}, {"eigenvalue", m.eigenvalue}, {"parity", std::move(labels)}});
  }
  j["parities"] = std::move(parities);
  return j.dump(2) + '\n';
}

VerifyResult verify_report(const RunConfig& config) {
  const auto session = open_session(config);
  // Extra modes so that the last requested cluster is known to be complete.
  const Spectrum spectrum = session->spectrum(config.modes + 4);
  const auto modes = classify(spectrum, session->problem.boundary_mass_block(), session->symmetric.action,
                              config.tol_parity, config.tol_eigen);

  std::vector<Check> checks;
  checks.push_back(free_boundary_check(session->problem, config.tol_residual));
  checks.push_back(courant(spectrum, session->mesh(), config));
  checks.push_back(parity_check(modes, spectrum, config.modes, config.tol_eigen));
  checks.push_back(orthogonality_check(session->problem, spectrum, modes, session->symmetric.action));

  VerifyResult result;
  result.passed = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  if (config.format == "csv") {
    result.report = "check,passed,detail\n";
    for (const auto& c : checks) result.report += fmt::format("{},{},\"{}\"\n", c.name, c.passed, c.detail);
    return result;
  }
  Json j;
  j["schema"] = 1;
  j["surface"] = config.surface;
  j["resolution"] = {config.resolution.axial, config.resolution.angular};
  auto list = Json::array();
  for (const auto& c : checks) list.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = std::move(list);
  j["passed"] = result.passed;
  result.report = j.dump(2) + '\n';
  return result;
}

std::string sweep_report(const RunConfig& config, const SweepConfig& sweep) {
  RunConfig base = config;
  base.surface = "critical-catenoid";
  validate(base);
  if (!(sweep.rho_min > 0.2 && sweep.rho_max < 2.5 && sweep.rho_min < sweep.rho_max)) {
    throw DomainError(fmt::format("rho range {}:{} must be increasing inside (0.2, 2.5)", sweep.rho_min, sweep.rho_max));
  }
  if (sweep.steps < 2) throw DomainError(fmt::format("--steps must be at least 2, got {}", sweep.steps));

  Json rows = Json::array();
  std::string csv = "rho,sigma1,multiplicity,boundary_length,sigma1_times_length,residual\n";
  for (int k = 0; k < sweep.steps; ++k) {
    const double rho = sweep.rho_min + (sweep.rho_max - sweep.rho_min) * k / (sweep.steps - 1);
    Session session(catalog(fmt::format("catenoid:{:.17g}", rho)), config.resolution);
    const Spectrum spectrum = session.spectrum(std::max(config.modes, 6));
    const auto cluster = spectrum.first_nonzero_cluster(config.tol_eigen);
    if (!cluster) throw SolverError(fmt::format("no nonzero eigenvalue at rho = {}", rho));
    const double length = boundary_length(session.mesh());
    double residual = 0.0;
    for (const auto& r : session.problem.coordinate_residual()) residual = std::max(residual, r.value_or(0.0));
    csv += fmt::format("{:.17g},{:.17g},{},{:.17g},{:.17g},{:.17g}\n", rho, cluster->value, cluster->multiplicity, length,
                       cluster->value * length, residual);
    rows.push_back({{"rho", rho},
                    {"sigma1", cluster->value},
                    {"multiplicity", cluster->multiplicity},
                    {"boundary_length", length},
                    {"sigma1_times_length", cluster->value * length},
                    {"residual", residual}});
  }
  if (config.format == "csv") return csv;
  Json j;
  j["schema"] = 1;
  j["family"] = "catenoid";
  j["resolution"] = {config.resolution.axial, config.resolution.angular};
  j["rows"] = std::move(rows);
  return j.dump(2) + '\n';
}

int orbit_count(std::string_view ending_edge) {
  OrbitPattern pattern;
  pattern.ending_edge = parse_arc_label(ending_edge);
  return orbit_nodal_count(pattern);
}

std::string nodal_report(const RunConfig& config, int mode) {
  if (mode < 0) throw DomainError(fmt::format("--mode must be non-negative, got {}", mode));
  const auto session = open_session(config);
  const Spectrum spectrum = session->spectrum(std::max(config.modes, mode + 1) + 4);
  if (mode >= spectrum.size()) throw DomainError(fmt::format("mode {} exceeds the {} computed modes", mode, spectrum.size()));
  const auto modes = classify(spectrum, session->problem.boundary_mass_block(), session->symmetric.action,
                              config.tol_parity, config.tol_eigen);
  const auto decomposition = nodal_domains(session->mesh(), modes[mode].extension, config.nodal_tau);
  const auto domain = fundamental_domain(session->mesh(), session->symmetric.action);
  return nodal_report_json(decomposition, nodal_line_endpoints(decomposition, domain)) + '\n';
}

std::string export_files(const RunConfig& config, const std::string& prefix) {
  if (prefix.empty()) throw DomainError("export requires --out PREFIX");
  const auto session = open_session(config);
  const std::string format = config.export_mesh.empty() ? "off" : config.export_mesh;
  std::vector<std::string> written;

  written.push_back(fmt::format("{}.{}", prefix, format));
  write_mesh(session->mesh(), format, written.back());

  const auto domain = fundamental_domain(session->mesh(), session->symmetric.action);
  written.push_back(prefix + ".domain.json");
  open_output(written.back()) << fundamental_domain_sidecar(domain) << '\n';

  written.push_back(prefix + ".stiffness.mtx");
  open_output(written.back()) << to_matrix_market(session->problem.stiffness());
  written.push_back(prefix + ".mass.mtx");
  open_output(written.back()) << to_matrix_market(session->problem.boundary_mass());

  return fmt::format("{}\n", fmt::join(written, "\n"));
}

}  // namespace steklab::cli
