#pragma once

// Test batteries that turn replication records into pass/fail reports, and
// their null-calibration counterparts on synthetic data.

#include <optional>
#include <vector>

#include "rggx/experiment.hpp"
#include "rggx/stats.hpp"

namespace rggx {

struct BatterySettings {
  double level = 0.01;
  double tolerance_scale = 1.0;
};

/// Limit intensity of each configured region (full plane first).
struct PoissonReferences {
  double total = 0.0;
  std::vector<double> regions;
};
PoissonReferences poisson_references(const ExperimentConfig& cfg);

/// Dispersion, goodness of fit against the limit mean, independence of the
/// region counts (when at least two regions with disjoint interiors are
/// configured) and per-region intensity, for every configured t.
std::vector<TestReport> poisson_battery(const ExperimentConfig& cfg, const std::vector<ReplicationRecord>& records,
                                        const BatterySettings& settings);

/// Reference covariance of (F1, F2) when the configuration admits one (cube,
/// coordinate plane, inverse-square weight, thermodynamic regime).
std::optional<Matrix2> clt_reference(const ExperimentConfig& cfg, const std::optional<StressIntegrals>& integrals);

/// clt_test for every configured t.
std::vector<TestReport> clt_battery(const ExperimentConfig& cfg, const std::vector<ReplicationRecord>& records,
                                    const std::optional<Matrix2>& sigma_ref, const BatterySettings& settings);

struct CalibrationSettings {
  int trials = 200;
  double level = 0.01;
  std::uint64_t seed = 1;
};

/// Largest acceptable false-rejection rate: level + 2 sqrt(level / trials).
double calibration_bound(double level, int trials);

/// Runs each Poisson-battery test on synthetic null data shaped like `cfg`
/// (replication count, region references) and reports its rejection rate.
std::vector<TestReport> calibrate_poisson_battery(const ExperimentConfig& cfg, const CalibrationSettings& settings);

/// Runs clt_test on synthetic bivariate normal samples with covariance
/// `sigma` and `n` samples per trial and reports the rejection rate. With
/// `compare_covariance` false only the normality sub-tests run.
TestReport calibrate_clt(const Matrix2& sigma, std::int64_t n, const CltOptions& options,
                         const CalibrationSettings& settings, bool compare_covariance = true);

bool all_passed(const std::vector<TestReport>& reports);

}  // namespace rggx
