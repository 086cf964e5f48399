#include "rggx/crossings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rggx/predicates.hpp"

namespace rggx {

namespace {

bool vertex_disjoint(const Edge& e, const Edge& f) {
  return e.a != f.a && e.a != f.b && e.b != f.a && e.b != f.b;
}

void canonical_sort(std::vector<CrossingEvent>& events) {
  std::sort(events.begin(), events.end(), [](const CrossingEvent& l, const CrossingEvent& r) {
    if (l.edge_a != r.edge_a) return l.edge_a < r.edge_a;
    return l.edge_b < r.edge_b;
  });
}

// Appends the crossing of edges e < f if their projections meet.
void test_pair(const std::vector<Point2>& proj, const Edge& e, const Edge& f, std::vector<CrossingEvent>& out) {
  if (!vertex_disjoint(e, f)) return;
  const Point2 a1 = proj[e.a], a2 = proj[e.b], b1 = proj[f.a], b2 = proj[f.b];
  if (std::max(a1.x, a2.x) < std::min(b1.x, b2.x) || std::max(b1.x, b2.x) < std::min(a1.x, a2.x) ||
      std::max(a1.y, a2.y) < std::min(b1.y, b2.y) || std::max(b1.y, b2.y) < std::min(a1.y, a2.y))
    return;
  if (const auto p = segments_intersect(a1, a2, b1, b2)) out.push_back({e, f, *p});
}

}  // namespace

std::vector<CrossingEvent> enumerate_crossings_bruteforce(const Graph& g, const ProjectionPlane& plane) {
  const auto proj = project_all(g.vertices, plane);
  std::vector<CrossingEvent> out;
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    for (std::size_t j = i + 1; j < g.edges.size(); ++j) {
      const Edge& e = std::min(g.edges[i], g.edges[j]);
      const Edge& f = std::max(g.edges[i], g.edges[j]);
      test_pair(proj, e, f, out);
    }
  canonical_sort(out);
  return out;
}

std::vector<CrossingEvent> enumerate_crossings(const Graph& g, const ProjectionPlane& plane) {
  std::vector<CrossingEvent> out;
  if (g.edges.size() < 2) return out;
  const auto proj = project_all(g.vertices, plane);

  // Each edge is keyed by its lexicographically smaller endpoint, so it lies in
  // [kx, kx + delta] x [ky - delta, ky + delta]. Two crossing edges thus have
  // keys within delta in x and 2 delta in y: a 3x5 stencil of delta cells.
  // The cell is slightly inflated so rounding cannot push a pair outside it.
  const double cell = g.delta * (1.0 + 1e-9);
  double minx = std::numeric_limits<double>::infinity();
  double miny = std::numeric_limits<double>::infinity();
  for (const auto& p : proj) {
    minx = std::min(minx, p.x);
    miny = std::min(miny, p.y);
  }

  struct Keyed {
    std::int64_t cx;
    std::int64_t cy;
    std::uint32_t edge;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(g.edges.size());
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const Edge& e = g.edges[k];
    const Point2 p = std::min(proj[e.a], proj[e.b], [](Point2 l, Point2 r) {
      return l.x < r.x || (l.x == r.x && l.y < r.y);
    });
    keyed.push_back({static_cast<std::int64_t>(std::floor((p.x - minx) / cell)),
                     static_cast<std::int64_t>(std::floor((p.y - miny) / cell)), static_cast<std::uint32_t>(k)});
  }
  auto cell_less = [](const Keyed& l, const Keyed& r) {
    return l.cx < r.cx || (l.cx == r.cx && (l.cy < r.cy || (l.cy == r.cy && l.edge < r.edge)));
  };
  std::sort(keyed.begin(), keyed.end(), cell_less);

  for (const Keyed& item : keyed) {
    const Edge& e = g.edges[item.edge];
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -2; dy <= 2; ++dy) {
        const Keyed probe{item.cx + dx, item.cy + dy, 0};
        auto it = std::lower_bound(keyed.begin(), keyed.end(), probe, cell_less);
        for (; it != keyed.end() && it->cx == probe.cx && it->cy == probe.cy; ++it) {
          if (it->edge <= item.edge) continue;  // each unordered pair once
          const Edge& f = g.edges[it->edge];
          test_pair(proj, std::min(e, f), std::max(e, f), out);
        }
      }
    }
  }
  canonical_sort(out);
  return out;
}

std::int64_t count_in_region(const std::vector<CrossingEvent>& events, const Region2& region) {
  if (region.is_full_plane()) return static_cast<std::int64_t>(events.size());
  return std::count_if(events.begin(), events.end(), [&](const CrossingEvent& ev) { return region.contains(ev.location); });
}

}  // namespace rggx
