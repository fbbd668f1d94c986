#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "steklab/mesh.hpp"
#include "steklab/nodal.hpp"

namespace steklab {

/// %.17g, enough digits to round-trip any double.
std::string format_double(double value);

void write_off(std::ostream& out, const TriangleMesh& mesh);
void write_obj(std::ostream& out, const TriangleMesh& mesh);
/// Reads vertices and triangles of an OFF file; boundary loops are recomputed
/// and plane tags are left at zero. Throws MeshError on malformed input.
TriangleMesh read_off(std::istream& in);

/// One value per line, in vertex order.
void write_vertex_scalars(std::ostream& out, const Eigen::VectorXd& values);

/// {"gamma":[ids...],"e1":[...],...}: full-mesh vertex ids of each labeled
/// arc of the domain. Repeated labels get suffixes "_2", "_3", ...
std::string fundamental_domain_sidecar(const FundamentalDomain& domain);

/// {"schema":1,"domain_count":n,"polylines":[[[x,y,z],...],...],"endpoints":[["gamma","e1"],...]}
/// Polylines and endpoints are those of the lines restricted to a fundamental
/// domain; a plane-coincident line reports "coincident:<label>" endpoints.
std::string nodal_report_json(const NodalDecomposition& decomposition, const std::vector<NodalLineReport>& lines);

}  // namespace steklab
