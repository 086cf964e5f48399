#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rggx/geometry.hpp"
#include "rggx/rng.hpp"

namespace rggx {

enum class RegimeKind { sparse, thermodynamic, explicit_radius };

/// Rule mapping the intensity t to the connection radius delta_t.
///   sparse:         t^2 delta^{d+1} = c
///   thermodynamic:  t delta^d = c
///   explicit:       delta fixed
struct RegimeSpec {
  RegimeKind kind = RegimeKind::thermodynamic;
  double value = 1.0;  // c for sparse/thermodynamic, delta for explicit
  int dimension = 3;

  static RegimeSpec sparse(double c, int d);
  static RegimeSpec thermodynamic(double c, int d);
  static RegimeSpec explicit_radius(double delta, int d);

  std::string name() const;
  friend bool operator==(const RegimeSpec&, const RegimeSpec&) = default;
};

double delta_for(const RegimeSpec& regime, double t);

/// Vertices of a Poisson process with intensity t on W (unit volume).
PointSet sample_poisson_process(const Window& w, double t, RngStream& rng);

/// n i.i.d. uniform points in W.
PointSet sample_uniform(const Window& w, std::size_t n, RngStream& rng);

struct Edge {
  std::uint32_t a = 0;  // a < b
  std::uint32_t b = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Random geometric graph: vertices plus every pair at distance <= delta.
/// Edges are sorted lexicographically.
struct Graph {
  PointSet vertices;
  std::vector<Edge> edges;
  double delta = 0.0;
};

/// Grid-accelerated construction (cells of side delta, 3^d stencil). The
/// result is identical to build_rgg_bruteforce.
Graph build_rgg(PointSet points, double delta);

/// O(n^2) pair scan; test oracle.
Graph build_rgg_bruteforce(PointSet points, double delta);

/// Squared Euclidean distance, shared by both constructions so the
/// ‖v - w‖ <= delta decision is identical.
double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace rggx
