#pragma once

#include <cstdint>
#include <vector>

#include "rggx/geometry.hpp"
#include "rggx/sampling.hpp"

namespace rggx {

/// One point of the crossing process: an unordered pair of vertex-disjoint
/// edges whose projections intersect. Canonical form: edge_a < edge_b, and
/// each edge stores its smaller vertex first.
struct CrossingEvent {
  Edge edge_a;
  Edge edge_b;
  Point2 location;

  friend bool operator==(const CrossingEvent&, const CrossingEvent&) = default;
};

/// All crossings of the projected graph, sorted canonically. Candidate pairs
/// come from a 2-D grid over the plane (cell side delta, 3x5 stencil keyed on
/// each edge's lexicographically smaller projected endpoint).
std::vector<CrossingEvent> enumerate_crossings(const Graph& g, const ProjectionPlane& plane);

/// O(m^2) scan over all edge pairs with the same output contract; test oracle.
std::vector<CrossingEvent> enumerate_crossings_bruteforce(const Graph& g, const ProjectionPlane& plane);

/// Number of events located in the closed region.
std::int64_t count_in_region(const std::vector<CrossingEvent>& events, const Region2& region);

}  // namespace rggx
