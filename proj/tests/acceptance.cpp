// Acceptance run: one PASS/FAIL line per criterion, plus INFO lines.
// Exit status is non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "rggx/battery.hpp"
#include "rggx/crossings.hpp"
#include "rggx/experiment.hpp"
#include "rggx/geometry.hpp"
#include "rggx/rng.hpp"
#include "rggx/sampling.hpp"
#include "rggx/stats.hpp"
#include "rggx/theory.hpp"

using namespace rggx;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void info(const char* fmt, auto... args) {
  std::printf("INFO  ");
  std::printf(fmt, args...);
  std::printf("\n");
  std::fflush(stdout);
}

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Two-sided KS p-value against N(0,1) for standardized data, with Stephens'
// finite-n correction.
double ks_p_value(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double d = ks_statistic_normal(standardize(x));
  return kolmogorov_sf(d * (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)));
}

// Shared experiments -------------------------------------------------------

const Region2 kQuadLow = Region2::rectangle({0.0, 0.0}, {0.5, 0.5});
const Region2 kQuadHigh = Region2::rectangle({0.5, 0.5}, {1.0, 1.0});

ExperimentConfig sparse_config() {
  ExperimentConfig cfg;
  cfg.window = Window::cube(3);
  cfg.plane = ProjectionPlane::standard(3);
  cfg.regime = RegimeSpec::sparse(4.14, 3);
  cfg.t_values = {2000.0};
  cfg.replications = 10000;
  cfg.regions = {kQuadLow, kQuadHigh};
  cfg.seed = 20240601;
  cfg.compute_stress = false;
  return cfg;
}

ExperimentConfig thermo_config() {
  ExperimentConfig cfg;
  cfg.window = Window::cube(3);
  cfg.plane = ProjectionPlane::standard(3);
  cfg.regime = RegimeSpec::thermodynamic(1.0, 3);
  cfg.t_values = {1000.0};
  cfg.replications = 2000;
  cfg.seed = 20240602;
  return cfg;
}

struct SparseRun {
  std::vector<ReplicationRecord> records;
  double seconds = 0.0;
};

struct ThermoRun {
  std::vector<ReplicationRecord> records;
  StressIntegrals integrals;
  double seconds = 0.0;
};

// Criteria -----------------------------------------------------------------

Outcome criterion_constants() {
  const auto start = Clock::now();
  const std::int64_t n = 10000000;
  bool ok = true;
  std::string detail;
  for (int d = 3; d <= 4; ++d) {
    RngStream r1(101, static_cast<std::uint64_t>(d));
    RngStream r2(102, static_cast<std::uint64_t>(d));
    const auto mc = c_d_montecarlo(d, n, r1);
    const auto mcp = c_d_prime_montecarlo(d, n, r2);
    const double z = (mc.estimate - c_d_closed(d)) / mc.std_error;
    const double zp = (mcp.estimate - c_d_prime_closed(d)) / mcp.std_error;
    ok = ok && std::abs(z) <= 3.0 && std::abs(zp) <= 3.0;
    detail += fmt("d=%d c_d closed=%.6g mc=%.6g+-%.2g (z=%.1f), c_d' closed=%.6g mc=%.6g+-%.2g (z=%.1f); ", d,
                  c_d_closed(d), mc.estimate, mc.std_error, z, c_d_prime_closed(d), mcp.estimate, mcp.std_error, zp);
    info("d=%d integral forms: c_d=%.6g (z=%.2f vs mc), c_d'=%.6g (z=%.2f vs mc)", d, c_d_integral(d),
         (mc.estimate - c_d_integral(d)) / mc.std_error, c_d_prime_integral(d),
         (mcp.estimate - c_d_prime_integral(d)) / mcp.std_error);
  }
  const double secs = seconds_since(start);
  ok = ok && secs < 60.0;
  detail += fmt("runtime %.1fs (limit 60s)", secs);
  return {ok, detail};
}

Outcome criterion_intensity(const SparseRun& run, const ExperimentConfig& cfg) {
  const auto totals = to_double(count_column(run.records, 0, -1));
  const double m = mean(totals);
  const double se = std::sqrt(variance(totals) / static_cast<double>(totals.size()));
  const double ref = limit_intensity(cfg.window, cfg.plane, 4.14, Region2::full_plane());
  const double tol = 3 * se + 0.05 * ref;
  const bool ok = std::abs(m - ref) <= tol && run.seconds < 600.0;

  const double ref_int = limit_intensity(cfg.window, cfg.plane, 4.14, Region2::full_plane(), ConstantSet::integral);
  const double delta = delta_for(cfg.regime, 2000.0);
  const auto br = intensity_bounds(cfg.window, cfg.plane, 2000.0, delta, Region2::full_plane(), ConstantSet::integral);
  info("intensity with integral-form c_d: limit %.4f (mean/limit %.3f); bracket [%.4f, %.4f]", ref_int, m / ref_int,
       br.lower, br.upper);
  return {ok, fmt("mean=%.4f se=%.4f limit=%.4f |diff|=%.4f tol=%.4f runtime %.0fs (limit 600s)", m, se, ref,
                  std::abs(m - ref), tol, run.seconds)};
}

Outcome criterion_poisson(const SparseRun& run, const ExperimentConfig& cfg) {
  const auto totals = count_column(run.records, 0, -1);
  const auto disp = dispersion_test(totals);
  const bool disp_ok = disp.statistic >= 0.95 && disp.statistic <= 1.05;
  const auto refs = poisson_references(cfg);
  const auto gof = poisson_gof(totals, refs.total, 0.01);
  const std::vector<std::vector<std::int64_t>> cols{count_column(run.records, 0, 0), count_column(run.records, 0, 1)};
  const auto ind = independence_test(cols, cfg.regions, 0.01);
  const auto loc = local_intensity_check(cols, refs.regions, IntensityTolerance{3.0, 0.05}, 0.01);
  const bool ok = disp_ok && gof.passed && ind.passed && loc.passed;

  const auto gof_emp = poisson_gof(totals, mean(to_double(totals)), 0.01, true);
  info("poisson fit against the sample mean: p=%.3g", gof_emp.p_value.value_or(-1));
  return {ok, fmt("D=%.4f in [0.95,1.05]: %s; gof p=%.3g: %s; independence r=%.4f p=%.3g: %s; quadrant means "
                  "%s: %s",
                  disp.statistic, disp_ok ? "yes" : "no", gof.p_value.value_or(-1), gof.passed ? "ok" : "rejected",
                  ind.statistic, ind.p_value.value_or(-1), ind.passed ? "ok" : "rejected", loc.detail.c_str(),
                  loc.passed ? "ok" : "mismatch")};
}

Outcome criterion_variance_mean(const SparseRun& run) {
  const auto totals = to_double(count_column(run.records, 0, -1));
  const double m = mean(totals);
  const double v = variance(totals);
  const double rel = std::abs(v - m) / m;
  return {rel <= 0.1, fmt("var=%.4f mean=%.4f |var-mean|/mean=%.4f (limit 0.1)", v, m, rel)};
}

Outcome criterion_clt_covariance(const ThermoRun& run) {
  const double t = 1000.0;
  const auto x = to_double(count_column(run.records, 0, -1));
  const auto s = value_column(run.records, 0, &ReplicationRecord::stress);
  const double var_x = variance(x);
  const double var_s = variance(s);
  const double cov = covariance(x, s);
  const auto m = cube_moments(3, t, 1.0, run.integrals);
  const double e1 = std::abs(var_x / m.var_crossings - 1.0);
  const double e2 = std::abs(cov / m.cov_cross_stress - 1.0);
  const double e3 = std::abs(var_s / std::pow(t, 3) / run.integrals.integral_s1_sq - 1.0);
  const bool ok = e1 <= 0.10 && e2 <= 0.15 && e3 <= 0.10 && run.seconds < 1800.0;

  const auto mi = cube_moments(3, t, 1.0, run.integrals, ConstantSet::integral);
  info("integral-form constants: Var(xi) ref %.4g (rel err %.3f), Cov ref %.4g (rel err %.3f)", mi.var_crossings,
       var_x / mi.var_crossings - 1.0, mi.cov_cross_stress, cov / mi.cov_cross_stress - 1.0);
  info("mean crossings %.1f vs leading %.1f (published) / %.1f (integral)", mean(x), m.exp_crossings,
       mi.exp_crossings);
  info("stress quadrature: int S1=%.6g int S1^2=%.6g (outer %d/axis, inner %d)", run.integrals.integral_s1,
       run.integrals.integral_s1_sq, run.integrals.outer_per_axis, run.integrals.inner_points);
  return {ok, fmt("Var(xi)=%.4g ref=%.4g rel=%.3f (<=0.10); Cov=%.4g ref=%.4g rel=%.3f (<=0.15); "
                  "Var(S)/t^3=%.5g ref=%.5g rel=%.3f (<=0.10); runtime %.0fs (limit 1800s)",
                  var_x, m.var_crossings, e1, cov, m.cov_cross_stress, e2, var_s / std::pow(t, 3),
                  run.integrals.integral_s1_sq, e3, run.seconds)};
}

Outcome criterion_clt_normality(const ThermoRun& run) {
  const auto f1 = value_column(run.records, 0, &ReplicationRecord::f1);
  const auto f2 = value_column(run.records, 0, &ReplicationRecord::f2);
  bool ok = true;
  std::string detail;
  for (const auto& [name, f] : {std::pair{"F1", &f1}, std::pair{"F2", &f2}}) {
    const double p = ks_p_value(*f);
    const double g1 = skewness(*f);
    const double g2 = excess_kurtosis(*f);
    const bool good = p >= 0.01 && std::abs(g1) <= 0.15 && std::abs(g2) <= 0.3;
    ok = ok && good;
    detail += fmt("%s: KS p=%.3g skew=%.3f kurt=%.3f; ", name, p, g1, g2);
  }

  // Monotone improvement of the F1 marginal between t=500 and t=2000.
  const auto start = Clock::now();
  int improved = 0;
  const int repeats = 20;
  for (int rep = 0; rep < repeats; ++rep) {
    ExperimentConfig cfg = thermo_config();
    cfg.compute_stress = false;
    cfg.replications = 1000;
    cfg.seed = 7000 + static_cast<std::uint64_t>(rep);
    cfg.t_values = {500.0, 2000.0};
    const auto recs = run_replications(cfg, 1);
    const double ks500 = ks_statistic_normal(standardize(value_column(recs, 0, &ReplicationRecord::f1)));
    const double ks2000 = ks_statistic_normal(standardize(value_column(recs, 1, &ReplicationRecord::f1)));
    if (ks2000 <= ks500) ++improved;
    info("monotone repeat %2d: KS(t=500)=%.4f KS(t=2000)=%.4f", rep, ks500, ks2000);
  }
  const bool mono = improved >= 16;
  ok = ok && mono;
  detail += fmt("KS(t=2000) <= KS(t=500) in %d/%d repeats (need 16); monotone runtime %.0fs", improved, repeats,
                seconds_since(start));
  return {ok, detail};
}

Outcome criterion_oracles() {
  int crossing_mismatch = 0;
  for (int inst = 0; inst < 300; ++inst) {
    RngStream rng(303, static_cast<std::uint64_t>(inst));
    const double delta = delta_for(RegimeSpec::thermodynamic(1.0, 3), 500.0);
    const auto g = build_rgg(sample_poisson_process(Window::cube(3), 500.0, rng), delta);
    const auto plane = ProjectionPlane::standard(3);
    if (enumerate_crossings(g, plane) != enumerate_crossings_bruteforce(g, plane)) ++crossing_mismatch;
  }
  int rgg_mismatch = 0;
  for (int inst = 0; inst < 200; ++inst) {
    RngStream rng(202, static_cast<std::uint64_t>(inst));
    const int d = 3 + inst % 3;
    const auto n = static_cast<std::size_t>(1 + rng() % 2000);
    const double delta = 0.01 + 0.3 * rng.uniform();
    const auto pts = sample_uniform(inst % 2 ? Window::ball(d) : Window::cube(d), n, rng);
    if (build_rgg(pts, delta).edges != build_rgg_bruteforce(pts, delta).edges) ++rgg_mismatch;
  }
  return {crossing_mismatch == 0 && rgg_mismatch == 0,
          fmt("crossings: %d/300 instances differ; rgg: %d/200 instances differ", crossing_mismatch, rgg_mismatch)};
}

Outcome criterion_geometry() {
  double worst_norm = 0.0;
  for (int d = 3; d <= 5; ++d) {
    const auto plane = ProjectionPlane::standard(d);
    worst_norm = std::max(worst_norm, std::abs(fiber_integral(Window::cube(d), plane, Region2::full_plane()) - 1.0));
    worst_norm = std::max(worst_norm, std::abs(fiber_integral(Window::ball(d), plane, Region2::full_plane()) - 1.0));
  }
  bool cube_one = true;
  double worst_ball = 0.0;
  RngStream rng(808, 0);
  for (int d = 3; d <= 6; ++d) {
    const auto plane = ProjectionPlane::standard(d);
    const auto ball = Window::ball(d);
    const double r = ball.scale();
    const double kappa = std::pow(M_PI, (d - 2) / 2.0) / std::tgamma((d - 2) / 2.0 + 1.0);
    for (int i = 0; i < 100000; ++i) {
      const Point2 u{rng.uniform(), rng.uniform()};
      cube_one = cube_one && fiber_measure(Window::cube(d), plane, u) == 1.0;
      const Point2 v{(2 * rng.uniform() - 1) * r, (2 * rng.uniform() - 1) * r};
      const double rho2 = v.x * v.x + v.y * v.y;
      const double expected = rho2 >= r * r ? 0.0 : kappa * std::pow(r * r - rho2, (d - 2) / 2.0);
      worst_ball = std::max(worst_ball, std::abs(fiber_measure(ball, plane, v) - expected));
    }
  }
  return {worst_norm <= 1e-3 && cube_one && worst_ball <= 1e-12,
          fmt("max |int fiber - 1| = %.2g (<=1e-3); cube fiber == 1: %s; max ball fiber error %.2g (<=1e-12)",
              worst_norm, cube_one ? "yes" : "no", worst_ball)};
}

Outcome criterion_calibration(const ExperimentConfig& sparse, const Matrix2& sigma) {
  CalibrationSettings cs;
  cs.trials = 200;
  cs.level = 0.01;
  cs.seed = 909;
  auto reports = calibrate_poisson_battery(sparse, cs);
  reports.push_back(calibrate_clt(sigma, 2000, CltOptions{}, cs));
  bool ok = true;
  std::string detail;
  for (const auto& r : reports) {
    ok = ok && r.passed;
    detail += fmt("%s %s; ", r.name.c_str(), r.detail.c_str());
  }
  detail += fmt("bound %.4f", calibration_bound(0.01, 200));
  return {ok, detail};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* title, const Outcome& o) {
    std::printf("%s criterion %d (%s): %s\n", o.passed ? "PASS" : "FAIL", id, title, o.detail.c_str());
    std::fflush(stdout);
    if (!o.passed) ++failures;
  };

  report(1, "constants", criterion_constants());

  const auto sparse = sparse_config();
  SparseRun srun;
  {
    const auto start = Clock::now();
    srun.records = run_replications(sparse, 1);
    srun.seconds = seconds_since(start);
  }
  report(2, "intensity", criterion_intensity(srun, sparse));
  report(3, "poisson convergence", criterion_poisson(srun, sparse));
  report(4, "variance vs mean", criterion_variance_mean(srun));

  ThermoRun trun;
  {
    const auto cfg = thermo_config();
    const auto start = Clock::now();
    trun.integrals = stress_integrals(cfg.window, cfg.plane, cfg.quadrature);
    trun.records = run_replications(cfg, 1);
    trun.seconds = seconds_since(start);
  }
  report(5, "clt covariance", criterion_clt_covariance(trun));
  report(6, "clt normality", criterion_clt_normality(trun));
  report(7, "oracle equivalence", criterion_oracles());
  report(8, "geometry identities", criterion_geometry());
  report(9, "calibration", criterion_calibration(sparse, cube_moments(3, 1000.0, 1.0, trun.integrals).sigma));

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
