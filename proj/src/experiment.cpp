#include "rggx/experiment.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "rggx/crossings.hpp"

namespace rggx {

void ExperimentConfig::validate() const {
  if (replications < 1) throw ConfigurationError("replications: must be at least 1");
  if (t_values.empty()) throw ConfigurationError("t: at least one intensity required");
  for (double t : t_values)
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigurationError("t: intensities must be positive and finite");
  if (plane.dimension() != window.dimension()) throw ConfigurationError("plane: dimension differs from window");
  if (regime.dimension != window.dimension()) throw ConfigurationError("regime: dimension differs from window");
  if (!(regime.value > 0.0)) throw ConfigurationError("regime: parameter must be positive");
  if (window.kind() == WindowKind::cube && !plane.coordinate_axes())
    throw ConfigurationError("plane: the cube window needs a coordinate-axis plane");
  if (!(intensity_slack >= 0.0)) throw ConfigurationError("intensity_slack: must be non-negative");
  if (quadrature.outer_per_axis <= 0 || quadrature.inner_points <= 0)
    throw ConfigurationError("quadrature: resolutions must be positive");
}

std::uint64_t replication_stream(std::int64_t t_index, std::int64_t rep) {
  return (static_cast<std::uint64_t>(t_index) << 40) ^ static_cast<std::uint64_t>(rep);
}

ReplicationRecord simulate_replication(const ExperimentConfig& cfg, std::int64_t t_index, std::int64_t rep) {
  const double t = cfg.t_values[static_cast<std::size_t>(t_index)];
  RngStream rng(cfg.seed, replication_stream(t_index, rep));
  ReplicationRecord rec;
  rec.t_index = t_index;
  rec.t = t;
  rec.delta = delta_for(cfg.regime, t);
  rec.replication = rep;
  auto points = sample_poisson_process(cfg.window, t, rng);
  rec.n_points = static_cast<std::int64_t>(points.size());
  rec.stress = cfg.compute_stress ? stress_total(points, cfg.plane, cfg.weight)
                                  : std::numeric_limits<double>::quiet_NaN();
  const Graph g = build_rgg(std::move(points), rec.delta);
  rec.n_edges = static_cast<std::int64_t>(g.edges.size());
  const auto events = enumerate_crossings(g, cfg.plane);
  rec.crossings = static_cast<std::int64_t>(events.size());
  rec.region_counts.reserve(cfg.regions.size());
  for (const auto& region : cfg.regions) rec.region_counts.push_back(count_in_region(events, region));
  return rec;
}

void assign_normalized(std::vector<ReplicationRecord>& records, int dimension) {
  std::int64_t max_t = -1;
  for (const auto& r : records) max_t = std::max(max_t, r.t_index);
  for (std::int64_t ti = 0; ti <= max_t; ++ti) {
    double sum_x = 0.0;
    double sum_s = 0.0;
    std::int64_t n = 0;
    for (const auto& r : records) {
      if (r.t_index != ti) continue;
      sum_x += static_cast<double>(r.crossings);
      sum_s += r.stress;
      ++n;
    }
    if (n == 0) continue;
    const double mx = sum_x / static_cast<double>(n);
    const double ms = sum_s / static_cast<double>(n);
    for (auto& r : records) {
      if (r.t_index != ti) continue;
      const auto [f1, f2] = normalize_F(dimension, r.t, r.delta, static_cast<double>(r.crossings), r.stress, mx, ms);
      r.f1 = f1;
      r.f2 = f2;
    }
  }
}

std::vector<ReplicationRecord> run_replications(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  const auto n_t = static_cast<std::int64_t>(cfg.t_values.size());
  const std::int64_t total = n_t * cfg.replications;
  std::vector<ReplicationRecord> records(static_cast<std::size_t>(total));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t job = next++; job < total; job = next++) {
      records[static_cast<std::size_t>(job)] = simulate_replication(cfg, job / cfg.replications, job % cfg.replications);
    }
  };
  const int n_threads = std::max(1, threads);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  assign_normalized(records, cfg.window.dimension());
  return records;
}

std::vector<std::int64_t> count_column(const std::vector<ReplicationRecord>& records, std::int64_t t_index,
                                       int region) {
  std::vector<std::int64_t> out;
  for (const auto& r : records) {
    if (r.t_index != t_index) continue;
    out.push_back(region < 0 ? r.crossings : r.region_counts.at(static_cast<std::size_t>(region)));
  }
  return out;
}

std::vector<double> value_column(const std::vector<ReplicationRecord>& records, std::int64_t t_index,
                                 double ReplicationRecord::*field) {
  std::vector<double> out;
  for (const auto& r : records)
    if (r.t_index == t_index) out.push_back(r.*field);
  return out;
}

}  // namespace rggx
