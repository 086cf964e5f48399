#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rggx/geometry.hpp"
#include "rggx/sampling.hpp"
#include "rggx/stress.hpp"
#include "rggx/theory.hpp"

namespace rggx {

struct ExperimentConfig {
  Window window = Window::cube(3);
  ProjectionPlane plane = ProjectionPlane::standard(3);
  RegimeSpec regime = RegimeSpec::thermodynamic(1.0, 3);
  std::vector<double> t_values{1000.0};
  std::int64_t replications = 100;
  std::vector<Region2> regions;
  std::uint64_t seed = 1;
  StressWeight weight = StressWeight::inverse_sq();
  bool compute_stress = true;
  ConstantSet constants = ConstantSet::published;
  // Relative O(delta) budget added to intensity tolerances.
  double intensity_slack = 0.05;
  StressQuadrature quadrature{};
  std::string output_dir;  // empty: resolved by the caller
  std::string output_prefix = "run";

  /// Throws ConfigurationError naming the offending field.
  void validate() const;
};

struct ReplicationRecord {
  std::int64_t t_index = 0;
  double t = 0.0;
  double delta = 0.0;
  std::int64_t replication = 0;
  std::int64_t n_points = 0;
  std::int64_t n_edges = 0;
  std::int64_t crossings = 0;
  std::vector<std::int64_t> region_counts;
  double stress = 0.0;  // NaN when stress is disabled
  double f1 = 0.0;
  double f2 = 0.0;

  friend bool operator==(const ReplicationRecord&, const ReplicationRecord&) = default;
};

/// Stream id of replication `rep` at intensity index `t_index`.
std::uint64_t replication_stream(std::int64_t t_index, std::int64_t rep);

/// Simulates one replication: sample, build the graph, enumerate crossings,
/// count per region, compute stress. F1/F2 are left at zero.
ReplicationRecord simulate_replication(const ExperimentConfig& cfg, std::int64_t t_index, std::int64_t rep);

/// All replications for every configured t, ordered by (t_index, replication).
/// F1/F2 are centred by the empirical mean of each t group. Work is spread
/// over `threads` workers; the output does not depend on the thread count.
std::vector<ReplicationRecord> run_replications(const ExperimentConfig& cfg, int threads = 1);

/// Fills F1/F2 of each t group, centring by the group's empirical means.
void assign_normalized(std::vector<ReplicationRecord>& records, int dimension);

/// Column of region counts (or total crossings when region < 0) for one t.
std::vector<std::int64_t> count_column(const std::vector<ReplicationRecord>& records, std::int64_t t_index,
                                       int region);
std::vector<double> value_column(const std::vector<ReplicationRecord>& records, std::int64_t t_index,
                                 double ReplicationRecord::*field);

}  // namespace rggx
