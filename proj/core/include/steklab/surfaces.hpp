#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace steklab {

using Vec3 = Eigen::Vector3d;

/// Root of rho * tanh(rho) = 1 on [1, 2]. Bracketed bisection down to a
/// bracket width of ~1e-14, followed by two Newton polish steps.
double solve_rho0(double tolerance = 1e-14);

/// Half-height and overall scale of a catenoid
///   X(r, theta) = scale * (cosh r cos theta, cosh r sin theta, r),  |r| <= rho.
struct CatenoidParams {
  double rho = 1.0;
  double scale = 1.0;

  /// rho = rho0, scale = 1 / (rho0 cosh rho0). Meets the unit sphere orthogonally.
  static CatenoidParams critical();
  /// Catenoid of half-height rho, uniformly rescaled so both boundary circles
  /// lie on the unit sphere.
  static CatenoidParams unit_sphere_normalized(double rho);
};

Vec3 catenoid_point(double r, double theta, const CatenoidParams& params);

/// A coordinate plane {x_axis = 0}. Identified by axis index 0, 1, 2.
struct SymmetryPlane {
  int axis = 0;

  Vec3 normal() const { return Vec3::Unit(axis); }
  Vec3 reflect(const Vec3& p) const {
    Vec3 q = p;
    q[axis] = -q[axis];
    return q;
  }
  friend bool operator==(SymmetryPlane, SymmetryPlane) = default;
};

enum class SurfaceKind { Catenoid, Disk, Annulus };

/// Parameter pair (u, theta). u is the axial parameter r for catenoids and the
/// polar radius for planar surfaces; theta is periodic on [0, 2 pi).
struct ParameterPoint {
  double u = 0.0;
  double theta = 0.0;
};

/// Chart value together with its analytic first derivatives.
struct ChartJet {
  Vec3 point;
  Vec3 d_u;
  Vec3 d_theta;
};

/// Immutable analytic surface with boundary, with its chart and the coordinate
/// planes under which the image is invariant.
class ParametricSurface {
 public:
  static ParametricSurface catenoid(std::string name, CatenoidParams params);
  static ParametricSurface unit_disk();
  static ParametricSurface flat_annulus(double inner_radius);

  const std::string& name() const { return name_; }
  SurfaceKind kind() const { return kind_; }
  bool periodic() const { return true; }

  double u_min() const { return u_min_; }
  double u_max() const { return u_max_; }
  /// True when u = u_min is a boundary curve (false for the disk center).
  bool has_inner_boundary() const { return kind_ != SurfaceKind::Disk; }

  std::span<const SymmetryPlane> symmetry_planes() const { return planes_; }
  std::optional<CatenoidParams> catenoid_params() const;
  double inner_radius() const { return kind_ == SurfaceKind::Annulus ? u_min_ : 0.0; }

  Vec3 point(double u, double theta) const;
  Vec3 point(ParameterPoint p) const { return point(p.u, p.theta); }
  ChartJet jet(ParameterPoint p) const;

  /// Parameter point p' with chart(p') = R_plane(chart(p)). Throws DomainError
  /// if the plane is not one of the listed symmetry planes.
  ParameterPoint reflect(SymmetryPlane plane, ParameterPoint p) const;

  bool on_boundary(ParameterPoint p) const;

 private:
  ParametricSurface(std::string name, SurfaceKind kind, double u_min, double u_max,
                    std::vector<SymmetryPlane> planes, CatenoidParams params);

  std::string name_;
  SurfaceKind kind_;
  double u_min_;
  double u_max_;
  std::vector<SymmetryPlane> planes_;
  CatenoidParams catenoid_;
};

/// Outward unit conormal at a boundary parameter point, from the analytic
/// chart derivatives. Throws DomainError if p is not on the boundary.
Vec3 boundary_conormal(const ParametricSurface& surface, ParameterPoint p);

/// Catalog lookup. Accepted names:
///   critical-catenoid, catenoid:<rho>, unit-disk, flat-annulus:<inner-radius>
/// The parenthesized spellings catenoid(<rho>) and flat-annulus(<r>) are also
/// accepted.
ParametricSurface catalog(std::string_view name);

}  // namespace steklab
