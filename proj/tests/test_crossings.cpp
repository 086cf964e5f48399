#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rggx/crossings.hpp"
#include "rggx/rng.hpp"
#include "rggx/sampling.hpp"

using namespace rggx;

namespace {

Graph random_graph(std::uint64_t seed, const Window& w, double t, double delta) {
  RngStream rng(seed, 0);
  return build_rgg(sample_poisson_process(w, t, rng), delta);
}

}  // namespace

TEST_CASE("x configuration") {
  Graph g{PointSet(3, {0, 0, 0, 1, 1, 0.2, 0, 1, 0.7, 1, 0, 0.1}), {{0, 1}, {2, 3}}, 1.6};
  const auto ev = enumerate_crossings(g, ProjectionPlane::standard(3));
  REQUIRE(ev.size() == 1);
  CHECK(ev[0].location.x == doctest::Approx(0.5));
  CHECK(ev[0].location.y == doctest::Approx(0.5));
  CHECK(ev[0].edge_a == Edge{0, 1});
  CHECK(ev[0].edge_b == Edge{2, 3});
  CHECK(enumerate_crossings_bruteforce(g, ProjectionPlane::standard(3)) == ev);
}

TEST_CASE("edges sharing a vertex never cross") {
  // Projections of (0,1) and (0,2) overlap along a line through vertex 0.
  Graph g{PointSet(3, {0, 0, 0, 1, 0, 0.5, 0.5, 0, 0.9}), {{0, 1}, {0, 2}}, 2.0};
  CHECK(enumerate_crossings(g, ProjectionPlane::standard(3)).empty());
  CHECK(enumerate_crossings_bruteforce(g, ProjectionPlane::standard(3)).empty());
}

TEST_CASE("trivial graphs") {
  Graph empty{PointSet(3), {}, 0.1};
  CHECK(enumerate_crossings(empty, ProjectionPlane::standard(3)).empty());
  Graph one{PointSet(3, {0, 0, 0, 0.05, 0, 0}), {{0, 1}}, 0.1};
  CHECK(enumerate_crossings(one, ProjectionPlane::standard(3)).empty());
}

TEST_CASE("region counting") {
  std::vector<CrossingEvent> ev{{{0, 1}, {2, 3}, {0.2, 0.2}}, {{4, 5}, {6, 7}, {0.8, 0.8}}};
  CHECK(count_in_region(ev, Region2::rectangle({0, 0}, {0.5, 0.5})) == 1);
  CHECK(count_in_region(ev, Region2::full_plane()) == 2);
  CHECK(count_in_region(ev, Region2::disk({0.8, 0.8}, 0.01)) == 1);
}

TEST_CASE("grid enumeration equals the brute-force scan") {
  for (int inst = 0; inst < 300; ++inst) {
    const double delta = delta_for(RegimeSpec::thermodynamic(1.0, 3), 500);
    const auto g = random_graph(static_cast<std::uint64_t>(inst), Window::cube(3), 500, delta);
    const auto plane = ProjectionPlane::standard(3);
    const auto fast = enumerate_crossings(g, plane);
    const auto slow = enumerate_crossings_bruteforce(g, plane);
    REQUIRE_MESSAGE(fast == slow, "instance " << inst);
  }
}

TEST_CASE("grid enumeration on other windows and planes") {
  const double s = 1.0 / std::sqrt(3.0), h = 1.0 / std::sqrt(2.0);
  const auto tilted = ProjectionPlane::from_basis({s, s, s}, {h, -h, 0});
  for (int inst = 0; inst < 40; ++inst) {
    const auto w = inst % 2 ? Window::ball(3) : Window::cube(3);
    const auto plane = inst % 4 < 2 ? tilted : ProjectionPlane::axes(3, 2, 0);
    const auto g = random_graph(1000 + inst, w, 400, 0.12);
    REQUIRE(enumerate_crossings(g, plane) == enumerate_crossings_bruteforce(g, plane));
  }
  for (int inst = 0; inst < 20; ++inst) {
    const auto g = random_graph(2000 + inst, Window::cube(4), 600, 0.2);
    const auto plane = ProjectionPlane::standard(4);
    REQUIRE(enumerate_crossings(g, plane) == enumerate_crossings_bruteforce(g, plane));
  }
}

TEST_CASE("quadrant counts add up to the total") {
  for (int inst = 0; inst < 20; ++inst) {
    const auto g = random_graph(3000 + inst, Window::cube(3), 1000, 0.1);
    const auto ev = enumerate_crossings(g, ProjectionPlane::standard(3));
    std::int64_t sum = 0;
    for (const double x : {0.0, 0.5})
      for (const double y : {0.0, 0.5}) sum += count_in_region(ev, Region2::rectangle({x, y}, {x + 0.5, y + 0.5}));
    CHECK(sum == static_cast<std::int64_t>(ev.size()));
  }
}

TEST_CASE("crossing count is invariant under relabelling") {
  const auto g = random_graph(42, Window::cube(3), 1000, 0.1);
  std::vector<std::uint32_t> perm(g.vertices.size());
  for (std::uint32_t i = 0; i < perm.size(); ++i) perm[i] = i;
  RngStream rng(42, 1);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::uint32_t> inverse(perm.size());
  PointSet relabelled(3);
  for (std::uint32_t i = 0; i < perm.size(); ++i) {
    relabelled.push_back(g.vertices[perm[i]]);
    inverse[perm[i]] = i;
  }
  Graph h{relabelled, {}, g.delta};
  for (const auto& e : g.edges) {
    const auto a = inverse[e.a], b = inverse[e.b];
    h.edges.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(h.edges.begin(), h.edges.end());
  const auto plane = ProjectionPlane::standard(3);
  CHECK(enumerate_crossings(h, plane).size() == enumerate_crossings(g, plane).size());
  CHECK(enumerate_crossings(g, plane).size() > 100);
}
