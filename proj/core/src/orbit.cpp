#include "steklab/orbit.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "steklab/error.hpp"

namespace steklab {

namespace {

constexpr unsigned kFullPlanes = 0b111U;

void add_piece(ChordCell& cell, const std::vector<ArcLabel>& sides, int side, int part) {
  const ArcLabel label = sides[side];
  cell.pieces.push_back({side, part, label});
  if (label == ArcLabel::Gamma) {
    cell.touches_gamma = true;
  } else {
    cell.planes |= 1U << label_axis(label);
  }
}

int find(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

std::array<ChordCell, 2> chord_partition(const std::vector<ArcLabel>& sides, int start, int end) {
  const int n = static_cast<int>(sides.size());
  if (n < 2) throw DomainError("chord_partition: a polygon needs at least two sides");
  if (start < 0 || start >= n || end < 0 || end >= n) {
    throw DomainError(fmt::format("chord_partition: sides {} and {} outside [0, {})", start, end, n));
  }
  std::array<ChordCell, 2> cells;
  if (start == end) {
    add_piece(cells[0], sides, start, 1);
    add_piece(cells[1], sides, start, 0);
    for (int s = (start + 1) % n; s != start; s = (s + 1) % n) add_piece(cells[1], sides, s, 0);
    add_piece(cells[1], sides, start, 2);
    return cells;
  }
  // Cell 0 runs forward from the chord start to the chord end.
  add_piece(cells[0], sides, start, 1);
  for (int s = (start + 1) % n; s != end; s = (s + 1) % n) add_piece(cells[0], sides, s, 0);
  add_piece(cells[0], sides, end, 0);
  add_piece(cells[1], sides, end, 1);
  for (int s = (end + 1) % n; s != start; s = (s + 1) % n) add_piece(cells[1], sides, s, 0);
  add_piece(cells[1], sides, start, 0);
  return cells;
}

int orbit_nodal_count(const OrbitPattern& pattern) {
  constexpr int kGenerators = 3;
  if (pattern.group_order != 1 << kGenerators) {
    throw DomainError(fmt::format("orbit_nodal_count: group order {} is not 8", pattern.group_order));
  }
  for (int k = 0; k < kGenerators; ++k) {
    if (pattern.parities[k] == Parity::Mixed) {
      throw DomainError(fmt::format("orbit_nodal_count: mixed parity under generator {}", k + 1));
    }
  }
  const auto& sides = pattern.sides;
  auto sides_with = [&](ArcLabel label) {
    std::vector<int> out;
    for (int s = 0; s < static_cast<int>(sides.size()); ++s) {
      if (sides[s] == label) out.push_back(s);
    }
    return out;
  };
  const auto gamma = sides_with(ArcLabel::Gamma);
  if (gamma.size() != 1) {
    throw DomainError(fmt::format("orbit_nodal_count: domain has {} gamma sides, expected 1", gamma.size()));
  }
  const auto ending = sides_with(pattern.ending_edge);
  if (ending.empty()) {
    throw DomainError(
        fmt::format("orbit_nodal_count: ending edge {} is not a side of the domain", to_string(pattern.ending_edge)));
  }
  if (ending.size() > 1) {
    throw DomainError(
        fmt::format("orbit_nodal_count: ending edge {} labels {} sides", to_string(pattern.ending_edge), ending.size()));
  }

  const auto cells = chord_partition(sides, gamma.front(), ending.front());
  // Which cell borders each side piece.
  std::map<std::pair<int, int>, int> owner;
  for (int c = 0; c < 2; ++c) {
    for (const auto& piece : cells[c].pieces) owner[{piece.side, piece.part}] = c;
  }

  // Node (copy, cell) for each group element given as a reflection bitmask.
  const int copies = pattern.group_order;
  std::vector<int> parent(2 * copies);
  std::iota(parent.begin(), parent.end(), 0);
  for (int g = 0; g < copies; ++g) {
    for (const auto& [key, cell] : owner) {
      const ArcLabel label = sides[key.first];
      if (label == ArcLabel::Gamma) continue;
      const int axis = label_axis(label);
      if (pattern.parities[axis] == Parity::Odd) continue;
      // The reflected copy carries the reflected arc, so the same piece of the
      // shared side borders the same cell there.
      const int h = g ^ (1 << axis);
      const int a = find(parent, 2 * g + cell);
      const int b = find(parent, 2 * h + cell);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  int count = 0;
  for (int x = 0; x < 2 * copies; ++x) count += find(parent, x) == x ? 1 : 0;
  return count;
}

std::optional<std::pair<int, int>> chord_with_full_cells(const std::vector<ArcLabel>& sides) {
  const int n = static_cast<int>(sides.size());
  for (int start = 0; start < n; ++start) {
    for (int end = start; end < n; ++end) {
      const auto cells = chord_partition(sides, start, end);
      const bool full = std::all_of(cells.begin(), cells.end(), [](const ChordCell& c) {
        return c.touches_gamma && c.planes == kFullPlanes;
      });
      if (full) return std::pair{start, end};
    }
  }
  return std::nullopt;
}

}  // namespace steklab
