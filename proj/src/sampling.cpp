#include "rggx/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rggx {

RegimeSpec RegimeSpec::sparse(double c, int d) {
  if (!(c > 0.0)) throw std::invalid_argument("sparse regime constant must be positive");
  return {RegimeKind::sparse, c, d};
}

RegimeSpec RegimeSpec::thermodynamic(double c, int d) {
  if (!(c > 0.0)) throw std::invalid_argument("thermodynamic regime constant must be positive");
  return {RegimeKind::thermodynamic, c, d};
}

RegimeSpec RegimeSpec::explicit_radius(double delta, int d) {
  if (!(delta > 0.0)) throw std::invalid_argument("explicit radius must be positive");
  return {RegimeKind::explicit_radius, delta, d};
}

std::string RegimeSpec::name() const {
  switch (kind) {
    case RegimeKind::sparse: return "sparse";
    case RegimeKind::thermodynamic: return "thermodynamic";
    case RegimeKind::explicit_radius: return "explicit";
  }
  return "?";
}

double delta_for(const RegimeSpec& regime, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("intensity t must be positive");
  const double d = regime.dimension;
  switch (regime.kind) {
    case RegimeKind::sparse: return std::pow(regime.value / (t * t), 1.0 / (d + 1.0));
    case RegimeKind::thermodynamic: return std::pow(regime.value / t, 1.0 / d);
    case RegimeKind::explicit_radius: return regime.value;
  }
  return 0.0;
}

PointSet sample_uniform(const Window& w, std::size_t n, RngStream& rng) {
  const int d = w.dimension();
  PointSet out(d);
  out.reserve(n);
  std::vector<double> x(static_cast<std::size_t>(d));
  if (w.kind() == WindowKind::cube) {
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& c : x) c = rng.uniform();
      out.push_back(x);
    }
    return out;
  }
  const double r = w.scale();
  for (std::size_t i = 0; i < n;) {
    double norm2 = 0.0;
    for (auto& c : x) {
      c = r * (2.0 * rng.uniform() - 1.0);
      norm2 += c * c;
    }
    if (norm2 <= r * r) {
      out.push_back(x);
      ++i;
    }
  }
  return out;
}

PointSet sample_poisson_process(const Window& w, double t, RngStream& rng) {
  if (!(t > 0.0)) throw std::invalid_argument("intensity t must be positive");
  // λ_d(W) = 1.
  const auto n = rng.poisson(t);
  return sample_uniform(w, static_cast<std::size_t>(n), rng);
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

Graph build_rgg_bruteforce(PointSet points, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  Graph g;
  g.delta = delta;
  const double r2 = delta * delta;
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (squared_distance(points[i], points[j]) <= r2)
        g.edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    }
  }
  g.vertices = std::move(points);
  return g;
}

Graph build_rgg(PointSet points, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const std::size_t n = points.size();
  if (n > std::numeric_limits<std::uint32_t>::max()) throw std::length_error("too many vertices");
  Graph g;
  g.delta = delta;
  if (n < 2) {
    g.vertices = std::move(points);
    return g;
  }
  const int d = points.dimension();
  const auto ud = static_cast<std::size_t>(d);

  std::vector<double> lo(ud, std::numeric_limits<double>::infinity());
  std::vector<double> hi(ud, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = points[i];
    for (std::size_t k = 0; k < ud; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  // Cells per axis, padded by one on each side so stencil lookups never wrap.
  std::vector<std::uint64_t> extent(ud);
  __extension__ unsigned __int128 total = 1;
  for (std::size_t k = 0; k < ud; ++k) {
    extent[k] = static_cast<std::uint64_t>(std::floor((hi[k] - lo[k]) / delta)) + 3;
    total *= extent[k];
    if (total > std::numeric_limits<std::uint64_t>::max() / 2) {
      // Grid too fine to index linearly; fall back to the pair scan.
      return build_rgg_bruteforce(std::move(points), delta);
    }
  }

  auto cell_of = [&](std::size_t i, std::size_t k) {
    return static_cast<std::uint64_t>(std::floor((points[i][k] - lo[k]) / delta)) + 1;
  };
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t key = 0;
    for (std::size_t k = ud; k-- > 0;) key = key * extent[k] + cell_of(i, k);
    keyed[i] = {key, static_cast<std::uint32_t>(i)};
  }
  std::sort(keyed.begin(), keyed.end());

  // Stencil offsets in linear-key space.
  std::vector<std::int64_t> offsets{0};
  std::int64_t stride = 1;
  for (std::size_t k = 0; k < ud; ++k) {
    std::vector<std::int64_t> next;
    next.reserve(offsets.size() * 3);
    for (const auto o : offsets)
      for (int s = -1; s <= 1; ++s) next.push_back(o + s * stride);
    offsets = std::move(next);
    stride *= static_cast<std::int64_t>(extent[k]);
  }

  const double r2 = delta * delta;
  auto key_less = [](const std::pair<std::uint64_t, std::uint32_t>& e, std::uint64_t key) { return e.first < key; };
  std::size_t begin = 0;
  while (begin < n) {
    const std::uint64_t key = keyed[begin].first;
    std::size_t end = begin;
    while (end < n && keyed[end].first == key) ++end;
    for (const auto off : offsets) {
      const auto nkey = static_cast<std::uint64_t>(static_cast<std::int64_t>(key) + off);
      if (nkey < key) continue;  // each unordered cell pair once
      auto it = std::lower_bound(keyed.begin(), keyed.end(), nkey, key_less);
      for (; it != keyed.end() && it->first == nkey; ++it) {
        for (std::size_t s = begin; s < end; ++s) {
          const std::uint32_t i = keyed[s].second;
          const std::uint32_t j = it->second;
          if (nkey == key && j <= i) continue;
          if (squared_distance(points[i], points[j]) <= r2) g.edges.push_back({std::min(i, j), std::max(i, j)});
        }
      }
    }
    begin = end;
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.vertices = std::move(points);
  return g;
}

}  // namespace rggx
