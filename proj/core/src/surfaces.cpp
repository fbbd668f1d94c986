#include "steklab/surfaces.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

#include <fmt/format.h>

#include "steklab/error.hpp"

namespace steklab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double rho_residual(double rho) { return rho * std::tanh(rho) - 1.0; }

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

std::optional<double> parse_number(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

// Accepts "family:<x>" and "family(<x>)".
std::optional<std::string_view> family_argument(std::string_view name, std::string_view family) {
  if (!name.starts_with(family)) return std::nullopt;
  std::string_view rest = name.substr(family.size());
  if (rest.starts_with(':')) return rest.substr(1);
  if (rest.starts_with('(') && rest.ends_with(')')) return rest.substr(1, rest.size() - 2);
  return std::nullopt;
}

}  // namespace

double solve_rho0(double tolerance) {
  if (!(tolerance > 0.0)) {
    throw DomainError(fmt::format("solve_rho0: tolerance must be positive, got {}", tolerance));
  }
  // f(1) = tanh(1) - 1 < 0 and f(2) = 2 tanh(2) - 1 > 0; f is increasing on [1, 2].
  double lo = 1.0;
  double hi = 2.0;
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (rho_residual(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double rho = 0.5 * (lo + hi);
  for (int step = 0; step < 2; ++step) {
    const double sech = 1.0 / std::cosh(rho);
    const double slope = std::tanh(rho) + rho * sech * sech;
    rho -= rho_residual(rho) / slope;
  }
  return rho;
}

CatenoidParams CatenoidParams::critical() {
  const double rho0 = solve_rho0();
  return {rho0, 1.0 / (rho0 * std::cosh(rho0))};
}

CatenoidParams CatenoidParams::unit_sphere_normalized(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError(fmt::format("catenoid half-height must be positive, got {}", rho));
  }
  const double c = std::cosh(rho);
  return {rho, 1.0 / std::sqrt(c * c + rho * rho)};
}

Vec3 catenoid_point(double r, double theta, const CatenoidParams& params) {
  if (!(std::abs(r) <= params.rho)) {
    throw DomainError(fmt::format("catenoid_point: r = {} outside [-{}, {}]", r, params.rho, params.rho));
  }
  const double c = std::cosh(r);
  return params.scale * Vec3(c * std::cos(theta), c * std::sin(theta), r);
}

ParametricSurface::ParametricSurface(std::string name, SurfaceKind kind, double u_min, double u_max,
                                     std::vector<SymmetryPlane> planes, CatenoidParams params)
    : name_(std::move(name)),
      kind_(kind),
      u_min_(u_min),
      u_max_(u_max),
      planes_(std::move(planes)),
      catenoid_(params) {}

ParametricSurface ParametricSurface::catenoid(std::string name, CatenoidParams params) {
  if (!(params.rho > 0.0) || !(params.scale > 0.0)) {
    throw DomainError("catenoid parameters must be positive");
  }
  return {std::move(name), SurfaceKind::Catenoid, -params.rho, params.rho,
          {{0}, {1}, {2}}, params};
}

ParametricSurface ParametricSurface::unit_disk() {
  return {"unit-disk", SurfaceKind::Disk, 0.0, 1.0, {{0}, {1}}, {}};
}

ParametricSurface ParametricSurface::flat_annulus(double inner_radius) {
  if (!(inner_radius > 0.0 && inner_radius < 1.0)) {
    throw DomainError(fmt::format("flat annulus inner radius must lie in (0, 1), got {}", inner_radius));
  }
  return {fmt::format("flat-annulus:{}", inner_radius), SurfaceKind::Annulus, inner_radius, 1.0,
          {{0}, {1}}, {}};
}

std::optional<CatenoidParams> ParametricSurface::catenoid_params() const {
  if (kind_ != SurfaceKind::Catenoid) return std::nullopt;
  return catenoid_;
}

Vec3 ParametricSurface::point(double u, double theta) const {
  if (kind_ == SurfaceKind::Catenoid) {
    const double c = std::cosh(u);
    return catenoid_.scale * Vec3(c * std::cos(theta), c * std::sin(theta), u);
  }
  return {u * std::cos(theta), u * std::sin(theta), 0.0};
}

ChartJet ParametricSurface::jet(ParameterPoint p) const {
  const double ct = std::cos(p.theta);
  const double st = std::sin(p.theta);
  if (kind_ == SurfaceKind::Catenoid) {
    const double s = catenoid_.scale;
    const double ch = std::cosh(p.u);
    const double sh = std::sinh(p.u);
    return {s * Vec3(ch * ct, ch * st, p.u), s * Vec3(sh * ct, sh * st, 1.0),
            s * Vec3(-ch * st, ch * ct, 0.0)};
  }
  return {Vec3(p.u * ct, p.u * st, 0.0), Vec3(ct, st, 0.0), Vec3(-p.u * st, p.u * ct, 0.0)};
}

ParameterPoint ParametricSurface::reflect(SymmetryPlane plane, ParameterPoint p) const {
  bool listed = false;
  for (const auto& q : planes_) listed = listed || q == plane;
  if (!listed) {
    throw DomainError(fmt::format("{} is not symmetric about the plane x{} = 0", name_, plane.axis + 1));
  }
  switch (plane.axis) {
    case 0:
      return {p.u, wrap_angle(std::numbers::pi - p.theta)};
    case 1:
      return {p.u, wrap_angle(-p.theta)};
    default:
      return {-p.u, p.theta};
  }
}

bool ParametricSurface::on_boundary(ParameterPoint p) const {
  const double tol = 1e-12 * (1.0 + std::abs(u_max_));
  if (std::abs(p.u - u_max_) <= tol) return true;
  return has_inner_boundary() && std::abs(p.u - u_min_) <= tol;
}

Vec3 boundary_conormal(const ParametricSurface& surface, ParameterPoint p) {
  if (!surface.on_boundary(p)) {
    throw DomainError(fmt::format("boundary_conormal: ({}, {}) is not a boundary point of {}", p.u,
                                  p.theta, surface.name()));
  }
  const ChartJet j = surface.jet(p);
  // Component of d_u orthogonal to the boundary tangent d_theta.
  Vec3 eta = j.d_u - (j.d_u.dot(j.d_theta) / j.d_theta.squaredNorm()) * j.d_theta;
  eta.normalize();
  const bool outer = std::abs(p.u - surface.u_max()) <= std::abs(p.u - surface.u_min());
  return outer ? eta : Vec3(-eta);
}

ParametricSurface catalog(std::string_view name) {
  if (name == "critical-catenoid") {
    return ParametricSurface::catenoid("critical-catenoid", CatenoidParams::critical());
  }
  if (name == "unit-disk") return ParametricSurface::unit_disk();
  if (auto arg = family_argument(name, "catenoid")) {
    auto rho = parse_number(*arg);
    if (!rho) throw DomainError(fmt::format("bad catenoid half-height in '{}'", name));
    return ParametricSurface::catenoid(fmt::format("catenoid:{}", *rho),
                                       CatenoidParams::unit_sphere_normalized(*rho));
  }
  if (auto arg = family_argument(name, "flat-annulus")) {
    auto radius = parse_number(*arg);
    if (!radius) throw DomainError(fmt::format("bad inner radius in '{}'", name));
    return ParametricSurface::flat_annulus(*radius);
  }
  throw DomainError(fmt::format("unknown surface '{}'", name));
}

}  // namespace steklab
