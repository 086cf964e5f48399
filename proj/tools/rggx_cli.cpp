// rggx: constants table, simulations and the two theorem test batteries.
//
// Exit codes: 0 pass, 1 statistical failure, 2 usage or configuration error.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rggx/battery.hpp"
#include "rggx/config.hpp"
#include "rggx/experiment.hpp"
#include "rggx/records_io.hpp"
#include "rggx/rng.hpp"
#include "rggx/theory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentFlags {
  std::string config_path;
  std::string manifest_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out_dir;
  double level = 0.01;
  double tolerance_scale = 1.0;
  bool calibrate = false;
};

struct Loaded {
  rggx::ExperimentConfig cfg;
  rggx::RunSettings settings;
};

bool given(CLI::App& app, const std::string& name) {
  const auto* opt = app.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

// Settings come from the manifest when rerunning; explicit flags still win.
Loaded load(const ExperimentFlags& f, CLI::App& app) {
  if (f.config_path.empty() == f.manifest_path.empty())
    throw UsageError("exactly one of --config and --from-manifest is required");
  Loaded l;
  if (!f.manifest_path.empty()) {
    std::ifstream in(f.manifest_path);
    if (!in) throw rggx::ConfigurationError("manifest: cannot open '" + f.manifest_path + "'");
    json m;
    try {
      m = json::parse(in);
    } catch (const json::parse_error& e) {
      throw rggx::ConfigurationError(std::string("manifest: malformed JSON: ") + e.what());
    }
    l.cfg = rggx::config_from_manifest(m);
    l.settings.threads = m.value("threads", 1);
    l.settings.level = m.value("level", 0.01);
    l.settings.tolerance_scale = m.value("tolerance_scale", 1.0);
    l.settings.calibrate = m.value("calibrate", false);
  } else {
    l.cfg = rggx::load_config(f.config_path);
  }
  if (f.seed) l.cfg.seed = *f.seed;
  if (f.threads) l.settings.threads = *f.threads;
  if (given(app, "--level") || f.manifest_path.empty()) l.settings.level = f.level;
  if (given(app, "--tolerance-scale") || f.manifest_path.empty()) l.settings.tolerance_scale = f.tolerance_scale;
  if (f.calibrate) l.settings.calibrate = true;

  if (!f.out_dir.empty()) {
    l.cfg.output_dir = f.out_dir;
  } else if (l.cfg.output_dir.empty()) {
    const char* env = std::getenv(rggx::kOutDirEnv);
    l.cfg.output_dir = (env && *env) ? env : ".";
  }
  if (l.settings.threads < 1) throw UsageError("--threads must be at least 1");
  if (!(l.settings.level > 0.0 && l.settings.level < 1.0)) throw UsageError("--level must lie in (0, 1)");
  if (!(l.settings.tolerance_scale > 0.0)) throw UsageError("--tolerance-scale must be positive");
  return l;
}

fs::path output_path(const rggx::ExperimentConfig& cfg, const std::string& suffix) {
  return fs::path(cfg.output_dir) / (cfg.output_prefix + suffix);
}

std::string records_text(const rggx::ExperimentConfig& cfg, const std::vector<rggx::ReplicationRecord>& records) {
  std::ostringstream os;
  rggx::write_records_csv(os, records, cfg.regions.size());
  return os.str();
}

std::string reports_text(const std::vector<rggx::TestReport>& reports) {
  std::ostringstream os;
  rggx::write_reports_jsonl(os, reports);
  return os.str();
}

void print_reports(const std::vector<rggx::TestReport>& reports) {
  for (const auto& r : reports) {
    std::printf("%s %s statistic=%.6g reference=%.6g", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.statistic,
                r.reference);
    if (r.p_value) std::printf(" p=%.4g", *r.p_value);
    if (r.degenerate) std::printf(" (degenerate)");
    if (!r.detail.empty()) std::printf(" [%s]", r.detail.c_str());
    std::printf("\n");
  }
}

// Writes the records CSV (if any), the report file (if any) and the manifest.
// Everything is rendered in memory first so a failure leaves no partial file.
void write_outputs(const Loaded& l, const std::string& command, const std::vector<rggx::ReplicationRecord>* records,
                   const std::vector<rggx::TestReport>* reports) {
  fs::create_directories(l.cfg.output_dir);
  const auto csv = output_path(l.cfg, "_records.csv");
  const auto jsonl = output_path(l.cfg, "_report.jsonl");
  const auto manifest = output_path(l.cfg, "_manifest.json");
  const std::string csv_text = records ? records_text(l.cfg, *records) : std::string();
  const std::string report_text = reports ? reports_text(*reports) : std::string();
  const std::string manifest_text =
      rggx::make_manifest(l.cfg, l.settings, command, records ? csv.filename().string() : std::string()).dump(2) +
      "\n";
  if (records) rggx::write_file_atomic(csv.string(), csv_text);
  if (reports) rggx::write_file_atomic(jsonl.string(), report_text);
  rggx::write_file_atomic(manifest.string(), manifest_text);
}

std::pair<int, int> parse_d_range(const std::string& s) {
  int lo = 0, hi = 0;
  const auto dots = s.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      lo = hi = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
    } else {
      const std::string a = s.substr(0, dots), b = s.substr(dots + 2);
      lo = std::stoi(a, &used);
      if (used != a.size()) throw std::invalid_argument(s);
      hi = std::stoi(b, &used);
      if (used != b.size()) throw std::invalid_argument(s);
    }
  } catch (const std::exception&) {
    throw UsageError("--d: expected an integer or a range like 3..5, got '" + s + "'");
  }
  if (lo < 3) throw UsageError("--d: dimensions below 3 are not supported");
  if (hi < lo) throw UsageError("--d: empty range '" + s + "'");
  if (hi > 12) throw UsageError("--d: dimensions above 12 are not supported");
  return {lo, hi};
}

int cmd_constants(const std::string& d_range, std::int64_t samples, std::uint64_t seed, const std::string& set_name) {
  const auto [lo, hi] = parse_d_range(d_range);
  if (samples < 1000) throw UsageError("--samples must be at least 1000");
  const auto set = rggx::constant_set_from_string(set_name);
  std::printf("d,kappa_d_minus_2,c_d_closed,c_d_mc,c_d_mc_se,c_d_prime_closed,c_d_prime_mc,c_d_prime_mc_se\n");
  for (int d = lo; d <= hi; ++d) {
    const auto lc = rggx::limit_constants(d, set);
    rggx::RngStream r1(seed, static_cast<std::uint64_t>(2 * d));
    rggx::RngStream r2(seed, static_cast<std::uint64_t>(2 * d + 1));
    const auto mc = rggx::c_d_montecarlo(d, samples, r1);
    const auto mcp = rggx::c_d_prime_montecarlo(d, samples, r2);
    std::printf("%d,%.10g,%.10g,%.10g,%.4g,%.10g,%.10g,%.4g\n", d, lc.kappa, lc.c_d, mc.estimate, mc.std_error,
                lc.c_d_prime, mcp.estimate, mcp.std_error);
  }
  return kExitPass;
}

int cmd_simulate(const ExperimentFlags& f, CLI::App& app) {
  const auto l = load(f, app);
  const auto records = rggx::run_replications(l.cfg, l.settings.threads);
  write_outputs(l, "simulate", &records, nullptr);
  std::printf("wrote %zu records to %s\n", records.size(), output_path(l.cfg, "_records.csv").string().c_str());
  return kExitPass;
}

int cmd_poisson_test(const ExperimentFlags& f, CLI::App& app) {
  const auto l = load(f, app);
  if (l.cfg.regime.kind != rggx::RegimeKind::sparse)
    throw rggx::ConfigurationError("regime.kind: poisson-test needs the sparse regime, got " + l.cfg.regime.name());
  std::vector<rggx::TestReport> reports;
  if (l.settings.calibrate) {
    rggx::CalibrationSettings cs;
    cs.level = l.settings.level;
    cs.seed = l.cfg.seed;
    reports = rggx::calibrate_poisson_battery(l.cfg, cs);
    write_outputs(l, "poisson-test", nullptr, &reports);
  } else {
    const auto records = rggx::run_replications(l.cfg, l.settings.threads);
    reports = rggx::poisson_battery(l.cfg, records, {l.settings.level, l.settings.tolerance_scale});
    write_outputs(l, "poisson-test", &records, &reports);
  }
  print_reports(reports);
  return rggx::all_passed(reports) ? kExitPass : kExitFail;
}

int cmd_clt_test(const ExperimentFlags& f, CLI::App& app) {
  const auto l = load(f, app);
  if (l.cfg.regime.kind != rggx::RegimeKind::thermodynamic)
    throw rggx::ConfigurationError("regime.kind: clt-test needs the thermodynamic regime, got " +
                                   l.cfg.regime.name());
  if (!l.cfg.compute_stress) throw rggx::ConfigurationError("compute_stress: clt-test needs stress values");

  std::optional<rggx::StressIntegrals> integrals;
  if (l.cfg.window.kind() == rggx::WindowKind::cube && l.cfg.plane.coordinate_axes() &&
      l.cfg.weight.kind() == rggx::WeightKind::inverse_sq)
    integrals = rggx::stress_integrals(l.cfg.window, l.cfg.plane, l.cfg.quadrature);
  const auto sigma = rggx::clt_reference(l.cfg, integrals);

  std::vector<rggx::TestReport> reports;
  if (l.settings.calibrate) {
    rggx::CalibrationSettings cs;
    cs.level = l.settings.level;
    cs.seed = l.cfg.seed;
    rggx::CltOptions opts;
    opts.level = l.settings.level;
    opts.variance_tolerance *= l.settings.tolerance_scale;
    opts.covariance_tolerance *= l.settings.tolerance_scale;
    const rggx::Matrix2 s = sigma.value_or(rggx::Matrix2{{{1.0, 0.0}, {0.0, 1.0}}});
    reports.push_back(
        rggx::calibrate_clt(s, std::max<std::int64_t>(l.cfg.replications, 500), opts, cs, sigma.has_value()));
    write_outputs(l, "clt-test", nullptr, &reports);
  } else {
    const auto records = rggx::run_replications(l.cfg, l.settings.threads);
    reports = rggx::clt_battery(l.cfg, records, sigma, {l.settings.level, l.settings.tolerance_scale});
    write_outputs(l, "clt-test", &records, &reports);
  }
  print_reports(reports);
  return rggx::all_passed(reports) ? kExitPass : kExitFail;
}

void add_experiment_flags(CLI::App* sub, ExperimentFlags& f, bool tests) {
  sub->add_option("--config", f.config_path, "Experiment configuration (JSON, schema 1)");
  sub->add_option("--from-manifest", f.manifest_path, "Rerun the experiment recorded in a manifest");
  sub->add_option("--seed", f.seed, "Override the configured seed");
  sub->add_option("--threads", f.threads, "Worker threads for replications (default 1)");
  sub->add_option("--out-dir", f.out_dir,
                  std::string("Output directory (default: config outputs.dir, then $") + rggx::kOutDirEnv + ", then .)");
  if (tests) {
    sub->add_option("--level", f.level, "Significance level")->capture_default_str();
    sub->add_option("--tolerance-scale", f.tolerance_scale, "Multiplier on the relative tolerances")
        ->capture_default_str();
    sub->add_flag("--calibrate", f.calibrate, "Run the battery on synthetic null data instead");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projected random geometric graphs: crossings, stress and limit theorems"};
  app.require_subcommand(1);

  std::string d_range = "3..5";
  std::int64_t samples = 1000000;
  std::uint64_t const_seed = 1;
  std::string const_set = "published";
  auto* constants = app.add_subcommand("constants", "Print the limit constants as CSV");
  constants->add_option("--d", d_range, "Dimension or range, e.g. 3..5")->capture_default_str();
  constants->add_option("--samples", samples, "Monte Carlo samples per constant")->capture_default_str();
  constants->add_option("--seed", const_seed, "Monte Carlo seed")->capture_default_str();
  constants->add_option("--constants", const_set, "Closed forms: published or integral")->capture_default_str();

  ExperimentFlags sim_flags, poi_flags, clt_flags;
  auto* simulate = app.add_subcommand("simulate", "Run replications and write records + manifest");
  add_experiment_flags(simulate, sim_flags, false);
  auto* poisson = app.add_subcommand("poisson-test", "Poisson-limit battery (sparse regime)");
  add_experiment_flags(poisson, poi_flags, true);
  auto* clt = app.add_subcommand("clt-test", "Central-limit battery (thermodynamic regime)");
  add_experiment_flags(clt, clt_flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (constants->parsed()) return cmd_constants(d_range, samples, const_seed, const_set);
    if (simulate->parsed()) return cmd_simulate(sim_flags, *simulate);
    if (poisson->parsed()) return cmd_poisson_test(poi_flags, *poisson);
    if (clt->parsed()) return cmd_clt_test(clt_flags, *clt);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const rggx::ConfigurationError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
