#include "rggx/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "json.hpp"

namespace rggx {

namespace {

void require_same_size(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("sample sizes differ");
}

// Central moment of order k (biased, divisor n).
double central_moment(std::span<const double> x, int k) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += std::pow(v - m, k);
  return s / static_cast<double>(x.size());
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// D'Agostino (1970) transformation of sample skewness to N(0,1).
double skewness_z(double g1, double n) {
  const double y = g1 * std::sqrt((n + 1.0) * (n + 3.0) / (6.0 * (n - 2.0)));
  const double beta2 = 3.0 * (n * n + 27.0 * n - 70.0) * (n + 1.0) * (n + 3.0) /
                       ((n - 2.0) * (n + 5.0) * (n + 7.0) * (n + 9.0));
  const double w2 = -1.0 + std::sqrt(2.0 * (beta2 - 1.0));
  const double delta = 1.0 / std::sqrt(std::log(std::sqrt(w2)));
  const double alpha = std::sqrt(2.0 / (w2 - 1.0));
  const double ya = y / alpha;
  return delta * std::log(ya + std::sqrt(ya * ya + 1.0));
}

// Anscombe & Glynn (1983) transformation of sample kurtosis b2 to N(0,1).
double kurtosis_z(double b2, double n) {
  const double e = 3.0 * (n - 1.0) / (n + 1.0);
  const double var = 24.0 * n * (n - 2.0) * (n - 3.0) / ((n + 1.0) * (n + 1.0) * (n + 3.0) * (n + 5.0));
  const double x = (b2 - e) / std::sqrt(var);
  const double sqrt_beta1 = 6.0 * (n * n - 5.0 * n + 2.0) / ((n + 7.0) * (n + 9.0)) *
                            std::sqrt(6.0 * (n + 3.0) * (n + 5.0) / (n * (n - 2.0) * (n - 3.0)));
  const double a = 6.0 + 8.0 / sqrt_beta1 * (2.0 / sqrt_beta1 + std::sqrt(1.0 + 4.0 / (sqrt_beta1 * sqrt_beta1)));
  const double denom = 1.0 + x * std::sqrt(2.0 / (a - 4.0));
  const double term = std::cbrt((1.0 - 2.0 / a) / denom);
  return ((1.0 - 2.0 / (9.0 * a)) - term) / std::sqrt(2.0 / (9.0 * a));
}

double two_sided_normal_p(double z) { return 2.0 * (1.0 - normal_cdf(std::abs(z))); }

nlohmann::json to_json(const TestReport& r) {
  nlohmann::json j;
  j["test"] = r.name;
  j["statistic"] = r.statistic;
  j["reference"] = r.reference;
  j["p_value"] = r.p_value ? nlohmann::json(*r.p_value) : nlohmann::json(nullptr);
  j["z_score"] = r.z_score ? nlohmann::json(*r.z_score) : nlohmann::json(nullptr);
  j["level"] = r.level;
  j["passed"] = r.passed;
  j["degenerate"] = r.degenerate;
  j["detail"] = r.detail;
  if (!r.subtests.empty()) {
    j["subtests"] = nlohmann::json::array();
    for (const auto& s : r.subtests) j["subtests"].push_back(to_json(s));
  }
  return j;
}

}  // namespace

double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean of empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("variance needs two samples");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double covariance(std::span<const double> x, std::span<const double> y) {
  require_same_size(x, y);
  if (x.size() < 2) throw std::invalid_argument("covariance needs two samples");
  const double mx = mean(x);
  const double my = mean(y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return s / static_cast<double>(x.size() - 1);
}

double correlation(std::span<const double> x, std::span<const double> y) {
  const double vx = variance(x);
  const double vy = variance(y);
  if (vx <= 0.0 || vy <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return covariance(x, y) / std::sqrt(vx * vy);
}

double skewness(std::span<const double> x) {
  const double m2 = central_moment(x, 2);
  return central_moment(x, 3) / std::pow(m2, 1.5);
}

double excess_kurtosis(std::span<const double> x) {
  const double m2 = central_moment(x, 2);
  return central_moment(x, 4) / (m2 * m2) - 3.0;
}

std::vector<double> to_double(std::span<const std::int64_t> counts) {
  return {counts.begin(), counts.end()};
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(0.0, 1.0), p);
}

double chi_squared_cdf(double x, double df) {
  if (x <= 0.0) return 0.0;
  return boost::math::cdf(boost::math::chi_squared_distribution<double>(df), x);
}

double chi_squared_sf(double x, double df) {
  if (x <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(df), x));
}

double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.3) {
    // Small-x form: 1 - sqrt(2π)/x Σ exp(-(2k-1)^2 π^2 / (8 x^2)).
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double a = (2.0 * k - 1.0) * M_PI / x;
      s += std::exp(-a * a / 8.0);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * M_PI) / x * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

double poisson_pmf(std::int64_t k, double mean) {
  if (k < 0) return 0.0;
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(mean) - mean - std::lgamma(kd + 1.0));
}

std::vector<double> standardize(std::span<const double> x) {
  const double m = mean(x);
  const double sd = std::sqrt(variance(x));
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = sd > 0.0 ? (x[i] - m) / sd : 0.0;
  return out;
}

double ks_statistic_normal(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = normal_cdf(s[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

TestReport dispersion_test(std::span<const std::int64_t> counts, double level) {
  if (counts.size() < 100) throw std::invalid_argument("dispersion_test needs at least 100 counts");
  TestReport r;
  r.name = "dispersion";
  r.level = level;
  r.reference = 1.0;
  const auto x = to_double(counts);
  const double m = mean(x);
  if (m == 0.0) {
    r.degenerate = true;
    r.passed = true;
    r.detail = "all counts zero";
    return r;
  }
  const double n = static_cast<double>(x.size());
  const double dispersion = variance(x) / m;
  const double stat = (n - 1.0) * dispersion;
  const double cdf = chi_squared_cdf(stat, n - 1.0);
  const double sf = chi_squared_sf(stat, n - 1.0);
  r.statistic = dispersion;
  r.p_value = std::min(1.0, 2.0 * std::min(cdf, sf));
  r.z_score = (dispersion - 1.0) / std::sqrt(2.0 / (n - 1.0));
  r.passed = *r.p_value >= level;
  r.detail = "D=" + fmt(dispersion) + " mean=" + fmt(m) + " n=" + fmt(n);
  return r;
}

TestReport poisson_gof(std::span<const std::int64_t> counts, double mean_value, double level, bool mean_estimated) {
  if (!(mean_value > 0.0)) throw std::invalid_argument("poisson_gof needs a positive mean");
  if (counts.empty()) throw std::invalid_argument("poisson_gof needs counts");
  TestReport r;
  r.name = "poisson_gof";
  r.level = level;
  r.reference = mean_value;
  const double n = static_cast<double>(counts.size());
  const std::int64_t max_count = *std::max_element(counts.begin(), counts.end());

  // Cells [lo_k, hi_k]; the last one is open to the right.
  struct Cell {
    std::int64_t lo;
    std::int64_t hi;
    double expected;
  };
  std::vector<Cell> cells;
  double cum = 0.0;
  std::int64_t start = 0;
  double acc = 0.0;
  for (std::int64_t k = 0;; ++k) {
    const double p = poisson_pmf(k, mean_value);
    acc += p;
    cum += p;
    const double tail = std::max(0.0, 1.0 - cum);
    if (acc * n >= 5.0 && tail * n >= 5.0) {
      cells.push_back({start, k, acc * n});
      start = k + 1;
      acc = 0.0;
    }
    if (tail * n < 5.0 && k >= static_cast<std::int64_t>(mean_value)) {
      // Remaining mass (including this partial cell) goes to the open tail.
      cells.push_back({start, std::numeric_limits<std::int64_t>::max(), (acc + tail) * n});
      break;
    }
    if (k > max_count + 10 * static_cast<std::int64_t>(mean_value) + 1000) break;
  }
  // A trailing cell under 5 is folded into its neighbour.
  if (cells.size() >= 2 && cells.back().expected < 5.0) {
    cells[cells.size() - 2].hi = cells.back().hi;
    cells[cells.size() - 2].expected += cells.back().expected;
    cells.pop_back();
  }
  if (cells.size() < 2) {
    r.degenerate = true;
    r.passed = true;
    r.detail = "fewer than two usable bins";
    return r;
  }
  std::vector<double> observed(cells.size(), 0.0);
  for (const auto c : counts) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (c >= cells[i].lo && c <= cells[i].hi) {
        observed[i] += 1.0;
        break;
      }
    }
  }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const double diff = observed[i] - cells[i].expected;
    chi2 += diff * diff / cells[i].expected;
  }
  const double df = static_cast<double>(cells.size()) - 1.0 - (mean_estimated ? 1.0 : 0.0);
  if (df < 1.0) {
    r.degenerate = true;
    r.passed = true;
    r.detail = "no degrees of freedom left";
    return r;
  }
  r.statistic = chi2;
  r.p_value = chi_squared_sf(chi2, df);
  r.passed = *r.p_value >= level;
  r.detail = "bins=" + std::to_string(cells.size()) + " df=" + fmt(df) + " sample_mean=" +
             fmt(mean(to_double(counts)));
  return r;
}

TestReport independence_test(const std::vector<std::vector<std::int64_t>>& region_counts,
                             const std::vector<Region2>& regions, double level) {
  if (regions.size() < 2) throw std::invalid_argument("independence_test needs at least two regions");
  if (region_counts.size() != regions.size()) throw std::invalid_argument("one count column per region required");
  for (std::size_t i = 0; i < regions.size(); ++i)
    for (std::size_t j = i + 1; j < regions.size(); ++j)
      if (!regions[i].interior_disjoint(regions[j]))
        throw std::invalid_argument("regions " + std::to_string(i) + " and " + std::to_string(j) + " overlap");

  TestReport r;
  r.name = "independence";
  r.level = level;
  const std::size_t m = regions.size() * (regions.size() - 1) / 2;
  const double per_pair = level / static_cast<double>(m);
  r.passed = true;
  double max_abs = 0.0;
  double min_p = 1.0;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    for (std::size_t j = i + 1; j < regions.size(); ++j) {
      const auto x = to_double(region_counts[i]);
      const auto y = to_double(region_counts[j]);
      if (x.size() != y.size() || x.size() < 4) throw std::invalid_argument("count columns must share length >= 4");
      TestReport sub;
      sub.name = "correlation[" + std::to_string(i) + "," + std::to_string(j) + "]";
      sub.level = per_pair;
      const double rho = correlation(x, y);
      if (std::isnan(rho)) {
        sub.degenerate = true;
        sub.passed = true;
        sub.detail = "constant counts";
        r.degenerate = true;
        r.subtests.push_back(sub);
        continue;
      }
      const double z = std::atanh(std::clamp(rho, -0.999999999999, 0.999999999999)) *
                       std::sqrt(static_cast<double>(x.size()) - 3.0);
      sub.statistic = rho;
      sub.z_score = z;
      sub.p_value = two_sided_normal_p(z);
      sub.passed = *sub.p_value >= per_pair;
      r.passed = r.passed && sub.passed;
      if (std::abs(rho) >= max_abs) {
        max_abs = std::abs(rho);
        r.statistic = rho;
        r.z_score = z;
      }
      min_p = std::min(min_p, *sub.p_value);
      r.subtests.push_back(sub);
    }
  }
  r.p_value = std::min(1.0, min_p * static_cast<double>(m));
  r.detail = "pairs=" + std::to_string(m) + " bonferroni_level=" + fmt(per_pair);
  return r;
}

TestReport local_intensity_check(const std::vector<std::vector<std::int64_t>>& region_counts,
                                 std::span<const double> references, IntensityTolerance tol, double level) {
  if (region_counts.size() != references.size()) throw std::invalid_argument("one reference per region required");
  TestReport r;
  r.name = "local_intensity";
  r.level = level;
  r.passed = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < references.size(); ++i) {
    const auto x = to_double(region_counts[i]);
    if (x.size() < 2) throw std::invalid_argument("local_intensity_check needs two replications");
    const double m = mean(x);
    const double se = std::sqrt(variance(x) / static_cast<double>(x.size()));
    const double ref = references[i];
    const double allowed = tol.z * se + tol.relative * std::abs(ref);
    TestReport sub;
    sub.name = "region[" + std::to_string(i) + "]";
    sub.statistic = m;
    sub.reference = ref;
    sub.level = level;
    if (se > 0.0) {
      sub.z_score = (m - ref) / se;
      sub.p_value = two_sided_normal_p(*sub.z_score);
    }
    sub.passed = std::abs(m - ref) <= allowed;
    sub.detail = "se=" + fmt(se) + " allowed=" + fmt(allowed);
    r.passed = r.passed && sub.passed;
    const double excess = allowed > 0.0 ? std::abs(m - ref) / allowed : (m == ref ? 0.0 : INFINITY);
    if (excess >= worst) {
      worst = excess;
      r.statistic = m;
      r.reference = ref;
      r.z_score = sub.z_score;
    }
    r.subtests.push_back(sub);
  }
  r.detail = "tolerance: " + fmt(tol.z) + " s.e. + " + fmt(tol.relative) + " relative";
  return r;
}

TestReport clt_test(std::span<const double> f1, std::span<const double> f2, const std::optional<Matrix2>& sigma_ref,
                    const CltOptions& options) {
  require_same_size(f1, f2);
  if (f1.size() < 500) throw std::invalid_argument("clt_test needs at least 500 samples");
  TestReport r;
  r.name = "clt";
  r.level = options.level;
  const double n = static_cast<double>(f1.size());
  const Matrix2 s = {{{variance(f1), covariance(f1, f2)}, {covariance(f1, f2), variance(f2)}}};
  const double det = s[0][0] * s[1][1] - s[0][1] * s[0][1];
  if (!(s[0][0] > 0.0) || !(s[1][1] > 0.0) || !(det > 0.0)) {
    r.degenerate = true;
    r.passed = false;
    r.detail = "singular sample covariance";
    return r;
  }
  r.passed = true;
  auto add = [&](TestReport sub) {
    r.passed = r.passed && sub.passed;
    r.subtests.push_back(std::move(sub));
  };

  if (sigma_ref) {
    const std::array<std::pair<int, int>, 3> entries = {{{0, 0}, {1, 1}, {0, 1}}};
    for (const auto& [i, j] : entries) {
      TestReport sub;
      sub.name = "covariance[" + std::to_string(i) + "," + std::to_string(j) + "]";
      sub.statistic = s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      sub.reference = (*sigma_ref)[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const double tol = i == j ? options.variance_tolerance : options.covariance_tolerance;
      sub.level = options.level;
      sub.passed = std::abs(sub.statistic - sub.reference) <= tol * std::abs(sub.reference);
      sub.detail = "relative_error=" + fmt((sub.statistic - sub.reference) / sub.reference) + " tolerance=" + fmt(tol);
      add(sub);
    }
  }

  // Six normality sub-tests share the level.
  const double per_test = options.level / 6.0;
  const std::array<std::span<const double>, 2> margins = {f1, f2};
  for (std::size_t k = 0; k < margins.size(); ++k) {
    const std::string tag = "F" + std::to_string(k + 1);
    const auto z = standardize(margins[k]);
    {
      TestReport sub;
      sub.name = "ks[" + tag + "]";
      sub.level = per_test;
      sub.statistic = ks_statistic_normal(z);
      const double sq = std::sqrt(n);
      sub.p_value = kolmogorov_sf((sq + 0.12 + 0.11 / sq) * sub.statistic);
      sub.passed = *sub.p_value >= per_test;
      add(sub);
    }
    {
      TestReport sub;
      sub.name = "skewness[" + tag + "]";
      sub.level = per_test;
      sub.statistic = skewness(margins[k]);
      sub.z_score = skewness_z(sub.statistic, n);
      sub.p_value = two_sided_normal_p(*sub.z_score);
      sub.passed = *sub.p_value >= per_test;
      add(sub);
    }
    {
      TestReport sub;
      sub.name = "kurtosis[" + tag + "]";
      sub.level = per_test;
      sub.statistic = excess_kurtosis(margins[k]);
      sub.z_score = kurtosis_z(sub.statistic + 3.0, n);
      sub.p_value = two_sided_normal_p(*sub.z_score);
      sub.passed = *sub.p_value >= per_test;
      add(sub);
    }
  }
  r.statistic = s[0][1] / std::sqrt(s[0][0] * s[1][1]);
  r.detail = "n=" + fmt(n) + " sample_cov=[[" + fmt(s[0][0]) + "," + fmt(s[0][1]) + "],[" + fmt(s[1][0]) + "," +
             fmt(s[1][1]) + "]]";
  return r;
}

std::string to_json_line(const TestReport& report) { return to_json(report).dump(); }

}  // namespace rggx
