#include "rggx/battery.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rggx/rng.hpp"

namespace rggx {

namespace {

bool regions_disjoint(const std::vector<Region2>& regions) {
  for (std::size_t i = 0; i < regions.size(); ++i)
    for (std::size_t j = i + 1; j < regions.size(); ++j)
      if (!regions[i].interior_disjoint(regions[j])) return false;
  return true;
}

std::vector<std::vector<std::int64_t>> region_columns(const std::vector<ReplicationRecord>& records,
                                                      std::int64_t t_index, std::size_t n_regions) {
  std::vector<std::vector<std::int64_t>> cols;
  for (std::size_t k = 0; k < n_regions; ++k) cols.push_back(count_column(records, t_index, static_cast<int>(k)));
  return cols;
}

std::string t_tag(const ExperimentConfig& cfg, std::size_t ti) {
  std::ostringstream os;
  os << "[t=" << cfg.t_values[ti] << "]";
  return os.str();
}

TestReport rate_report(const std::string& name, int rejections, int trials, double level) {
  TestReport r;
  r.name = "calibration:" + name;
  r.level = level;
  r.statistic = static_cast<double>(rejections) / trials;
  r.reference = calibration_bound(level, trials);
  r.passed = r.statistic <= r.reference;
  r.detail = std::to_string(rejections) + "/" + std::to_string(trials) + " null rejections";
  return r;
}

}  // namespace

PoissonReferences poisson_references(const ExperimentConfig& cfg) {
  if (cfg.regime.kind != RegimeKind::sparse)
    throw ConfigurationError("regime: Poisson limit references need the sparse regime");
  PoissonReferences refs;
  const double c = cfg.regime.value;
  refs.total = limit_intensity(cfg.window, cfg.plane, c, Region2::full_plane(), cfg.constants);
  for (const auto& region : cfg.regions)
    refs.regions.push_back(limit_intensity(cfg.window, cfg.plane, c, region, cfg.constants));
  return refs;
}

std::vector<TestReport> poisson_battery(const ExperimentConfig& cfg, const std::vector<ReplicationRecord>& records,
                                        const BatterySettings& settings) {
  const auto refs = poisson_references(cfg);
  std::vector<TestReport> out;
  for (std::size_t ti = 0; ti < cfg.t_values.size(); ++ti) {
    const auto ti64 = static_cast<std::int64_t>(ti);
    const auto totals = count_column(records, ti64, -1);
    const std::string tag = t_tag(cfg, ti);

    auto disp = dispersion_test(totals, settings.level);
    disp.name += tag;
    out.push_back(disp);

    auto gof = poisson_gof(totals, refs.total, settings.level);
    gof.name += tag;
    out.push_back(gof);

    const auto cols = region_columns(records, ti64, cfg.regions.size());
    if (cfg.regions.size() >= 2 && regions_disjoint(cfg.regions)) {
      auto ind = independence_test(cols, cfg.regions, settings.level);
      ind.name += tag;
      out.push_back(ind);
    }
    if (!cfg.regions.empty()) {
      IntensityTolerance tol;
      tol.relative = cfg.intensity_slack * settings.tolerance_scale;
      auto loc = local_intensity_check(cols, refs.regions, tol, settings.level);
      loc.name += tag;
      out.push_back(loc);
    }
  }
  return out;
}

std::optional<Matrix2> clt_reference(const ExperimentConfig& cfg, const std::optional<StressIntegrals>& integrals) {
  if (cfg.window.kind() != WindowKind::cube || !cfg.plane.coordinate_axes() ||
      cfg.weight.kind() != WeightKind::inverse_sq || cfg.regime.kind != RegimeKind::thermodynamic || !integrals)
    return std::nullopt;
  // Sigma does not depend on t.
  return cube_moments(cfg.window.dimension(), cfg.t_values.front(), cfg.regime.value, *integrals, cfg.constants).sigma;
}

std::vector<TestReport> clt_battery(const ExperimentConfig& cfg, const std::vector<ReplicationRecord>& records,
                                    const std::optional<Matrix2>& sigma_ref, const BatterySettings& settings) {
  if (!cfg.compute_stress) throw ConfigurationError("compute_stress: the CLT battery needs stress values");
  CltOptions opts;
  opts.level = settings.level;
  opts.variance_tolerance *= settings.tolerance_scale;
  opts.covariance_tolerance *= settings.tolerance_scale;
  std::vector<TestReport> out;
  for (std::size_t ti = 0; ti < cfg.t_values.size(); ++ti) {
    const auto ti64 = static_cast<std::int64_t>(ti);
    const auto f1 = value_column(records, ti64, &ReplicationRecord::f1);
    const auto f2 = value_column(records, ti64, &ReplicationRecord::f2);
    auto rep = clt_test(f1, f2, sigma_ref, opts);
    rep.name += t_tag(cfg, ti);
    out.push_back(std::move(rep));
  }
  return out;
}

double calibration_bound(double level, int trials) { return level + 2.0 * std::sqrt(level / trials); }

std::vector<TestReport> calibrate_poisson_battery(const ExperimentConfig& cfg, const CalibrationSettings& settings) {
  const auto refs = poisson_references(cfg);
  const auto n = static_cast<std::size_t>(std::max<std::int64_t>(cfg.replications, 100));
  const bool with_independence = cfg.regions.size() >= 2 && regions_disjoint(cfg.regions);
  int rej_disp = 0, rej_gof = 0, rej_ind = 0, rej_loc = 0;
  IntensityTolerance tol;
  tol.relative = cfg.intensity_slack;
  for (int trial = 0; trial < settings.trials; ++trial) {
    RngStream rng(settings.seed, 0xCA11B000ull + static_cast<std::uint64_t>(trial));
    std::vector<std::int64_t> totals(n);
    for (auto& v : totals) v = rng.poisson(refs.total);
    std::vector<std::vector<std::int64_t>> cols(cfg.regions.size(), std::vector<std::int64_t>(n));
    for (std::size_t k = 0; k < cols.size(); ++k)
      for (auto& v : cols[k]) v = rng.poisson(refs.regions[k]);

    if (!dispersion_test(totals, settings.level).passed) ++rej_disp;
    if (!poisson_gof(totals, refs.total, settings.level).passed) ++rej_gof;
    if (with_independence && !independence_test(cols, cfg.regions, settings.level).passed) ++rej_ind;
    if (!cols.empty() && !local_intensity_check(cols, refs.regions, tol, settings.level).passed) ++rej_loc;
  }
  std::vector<TestReport> out;
  out.push_back(rate_report("dispersion", rej_disp, settings.trials, settings.level));
  out.push_back(rate_report("poisson_gof", rej_gof, settings.trials, settings.level));
  if (with_independence) out.push_back(rate_report("independence", rej_ind, settings.trials, settings.level));
  if (!cfg.regions.empty()) out.push_back(rate_report("local_intensity", rej_loc, settings.trials, settings.level));
  return out;
}

TestReport calibrate_clt(const Matrix2& sigma, std::int64_t n, const CltOptions& options,
                         const CalibrationSettings& settings, bool compare_covariance) {
  const double l11 = std::sqrt(sigma[0][0]);
  const double l21 = sigma[1][0] / l11;
  const double rest = sigma[1][1] - l21 * l21;
  if (!(l11 > 0.0) || !(rest > 0.0)) throw std::invalid_argument("calibrate_clt needs a positive definite sigma");
  const double l22 = std::sqrt(rest);
  int rejections = 0;
  std::vector<double> f1(static_cast<std::size_t>(n));
  std::vector<double> f2(static_cast<std::size_t>(n));
  for (int trial = 0; trial < settings.trials; ++trial) {
    RngStream rng(settings.seed, 0xC17000ull + static_cast<std::uint64_t>(trial));
    for (std::size_t i = 0; i < f1.size(); ++i) {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      f1[i] = l11 * z1;
      f2[i] = l21 * z1 + l22 * z2;
    }
    const auto ref = compare_covariance ? std::optional<Matrix2>(sigma) : std::nullopt;
    if (!clt_test(f1, f2, ref, options).passed) ++rejections;
  }
  return rate_report("clt", rejections, settings.trials, options.level);
}

bool all_passed(const std::vector<TestReport>& reports) {
  for (const auto& r : reports)
    if (!r.passed) return false;
  return true;
}

}  // namespace rggx
