#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rggx/rng.hpp"
#include "rggx/sampling.hpp"
#include "rggx/stats.hpp"

using namespace rggx;

TEST_CASE("regime radii") {
  CHECK(delta_for(RegimeSpec::sparse(4.14, 3), 2000) == doctest::Approx(0.031904).epsilon(1e-4));
  CHECK(delta_for(RegimeSpec::sparse(4.14, 3), 2000) == doctest::Approx(std::pow(4.14 / 4e6, 0.25)).epsilon(1e-14));
  CHECK(delta_for(RegimeSpec::thermodynamic(1.0, 3), 1000) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(delta_for(RegimeSpec::explicit_radius(0.05, 3), 10) == 0.05);
  CHECK(delta_for(RegimeSpec::explicit_radius(0.05, 3), 1e6) == 0.05);
  // Exact inversion: t^2 delta^{d+1} = c.
  for (int d = 3; d <= 6; ++d) {
    const double delta = delta_for(RegimeSpec::sparse(2.5, d), 777);
    CHECK(777.0 * 777.0 * std::pow(delta, d + 1) == doctest::Approx(2.5).epsilon(1e-12));
  }
  CHECK_THROWS(RegimeSpec::sparse(0.0, 3));
  CHECK_THROWS(RegimeSpec::thermodynamic(-1.0, 3));
  CHECK_THROWS(RegimeSpec::explicit_radius(0.0, 3));
  CHECK_THROWS(delta_for(RegimeSpec::thermodynamic(1.0, 3), 0.0));
}

TEST_CASE("poisson process point counts") {
  const int runs = 10000;
  std::vector<double> counts(runs);
  for (int i = 0; i < runs; ++i) {
    RngStream rng(99, static_cast<std::uint64_t>(i));
    counts[i] = static_cast<double>(sample_poisson_process(Window::cube(3), 1000, rng).size());
  }
  CHECK(std::abs(mean(counts) - 1000.0) <= 0.95);
  CHECK(std::abs(variance(counts) / 1000.0 - 1.0) <= 0.05);
}

TEST_CASE("points are uniform in the window") {
  RngStream rng(4, 0);
  const auto ball = Window::ball(3);
  const auto pts = sample_uniform(ball, 200000, rng);
  const double r = ball.scale();
  std::int64_t near = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    REQUIRE(ball.contains(pts[i]));
    const auto p = pts[i];
    if (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] <= r * r / 4) ++near;
  }
  const double frac = static_cast<double>(near) / pts.size();
  CHECK(std::abs(frac - 0.125) <= 3 * std::sqrt(0.125 * 0.875 / pts.size()));

  const auto cube_pts = sample_uniform(Window::cube(4), 1000, rng);
  for (std::size_t i = 0; i < cube_pts.size(); ++i) REQUIRE(Window::cube(4).contains(cube_pts[i]));
}

TEST_CASE("rgg examples") {
  PointSet ps(3, {0, 0, 0, 0, 0, 0.05, 0.9, 0.9, 0.9});
  const auto g = build_rgg(ps, 0.1);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0] == Edge{0, 1});
  CHECK(build_rgg(PointSet(3), 0.1).edges.empty());
  // Closed ball: distance exactly delta is an edge.
  PointSet pair(3, {0, 0, 0, 0.5, 0, 0});
  CHECK(build_rgg(pair, 0.5).edges.size() == 1);
  CHECK_THROWS(build_rgg(pair, 0.0));
}

TEST_CASE("grid build equals the pair scan") {
  for (int inst = 0; inst < 200; ++inst) {
    RngStream rng(77, static_cast<std::uint64_t>(inst));
    const int d = 3 + inst % 3;
    const auto n = static_cast<std::size_t>(1 + rng() % 2000);
    const double delta = 0.01 + 0.3 * rng.uniform();
    const auto w = inst % 2 ? Window::cube(d) : Window::ball(d);
    auto pts = sample_uniform(w, n, rng);
    const auto fast = build_rgg(pts, delta);
    const auto slow = build_rgg_bruteforce(pts, delta);
    REQUIRE_MESSAGE(fast.edges == slow.edges, "instance " << inst);
    REQUIRE(std::is_sorted(fast.edges.begin(), fast.edges.end()));
    for (const auto& e : fast.edges) REQUIRE(e.a < e.b);
  }
}

TEST_CASE("rgg is invariant under point relabelling") {
  RngStream rng(8, 0);
  const auto pts = sample_uniform(Window::cube(3), 800, rng);
  std::vector<std::size_t> perm(pts.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  PointSet shuffled(3);
  for (const auto i : perm) shuffled.push_back(pts[i]);
  const auto g = build_rgg(pts, 0.1);
  const auto h = build_rgg(shuffled, 0.1);
  std::vector<Edge> mapped;
  for (const auto& e : h.edges) {
    const auto a = static_cast<std::uint32_t>(perm[e.a]), b = static_cast<std::uint32_t>(perm[e.b]);
    mapped.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(mapped.begin(), mapped.end());
  CHECK(mapped == g.edges);
}
