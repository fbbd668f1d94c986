#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "steklab/mesh.hpp"
#include "steklab/symmetry.hpp"

namespace steklab {

/// A nodal arc in a fundamental domain of three commuting reflections, running
/// from the interior of the gamma side to the interior of ending_edge.
struct OrbitPattern {
  ArcLabel ending_edge = ArcLabel::Gamma;
  int group_order = 8;
  /// Parity of the eigenfunction under each reflection. An odd parity makes
  /// the plane part of the nodal set, so cells do not merge across it.
  std::array<Parity, 3> parities{Parity::Even, Parity::Even, Parity::Even};
  /// Sides of the fundamental domain in cyclic order.
  std::vector<ArcLabel> sides{ArcLabel::Gamma, ArcLabel::E2, ArcLabel::E3, ArcLabel::E1};
};

/// Piece of a side cut off by chord endpoints. `part` counts pieces along the
/// side: 0 and 1 for a side cut once, 0..2 for a side cut twice.
struct SidePiece {
  int side = 0;
  int part = 0;
  ArcLabel label = ArcLabel::Gamma;
};

struct ChordCell {
  std::vector<SidePiece> pieces;
  /// Bit k set when the cell touches the plane {x_(k+1) = 0}.
  unsigned planes = 0;
  bool touches_gamma = false;
};

/// The two cells of a polygon with the given cyclic sides cut by a chord
/// between interior points of sides `start` and `end`. With start == end the
/// chord cuts off the middle piece of that side.
std::array<ChordCell, 2> chord_partition(const std::vector<ArcLabel>& sides, int start, int end);

/// Number of nodal domains on the union of the reflected copies of the
/// fundamental domain, each carrying the reflected nodal arc. Copies are glued
/// along plane sides; cells merge across a plane when the function is even
/// under that reflection. Throws DomainError if the ending edge is not a side,
/// labels more than one side, the domain has no single gamma side, the group
/// order is not 8, or a parity is mixed.
int orbit_nodal_count(const OrbitPattern& pattern);

/// A chord (start side, end side) leaving both cells in contact with gamma and
/// all three planes, if the polygon admits one. Such a chord is what a
/// two-domain nodal arc would need; none exists when there are at most four
/// plane sides.
std::optional<std::pair<int, int>> chord_with_full_cells(const std::vector<ArcLabel>& sides);

}  // namespace steklab
