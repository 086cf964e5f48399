#pragma once

// Statistical test battery: Poisson-process proxies (dispersion, goodness of
// fit, independence over disjoint regions, local intensity) and normal
// approximation checks (covariance match, KS, skewness, kurtosis).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rggx/geometry.hpp"
#include "rggx/theory.hpp"

namespace rggx {

struct TestReport {
  std::string name;
  double statistic = 0.0;
  double reference = 0.0;
  std::optional<double> p_value;
  std::optional<double> z_score;
  double level = 0.01;
  bool passed = false;
  bool degenerate = false;
  std::string detail;
  std::vector<TestReport> subtests;
};

// Descriptive helpers -------------------------------------------------------

double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);
double covariance(std::span<const double> x, std::span<const double> y);
double correlation(std::span<const double> x, std::span<const double> y);
/// Sample skewness g1 = m3 / m2^{3/2}.
double skewness(std::span<const double> x);
/// Sample excess kurtosis g2 = m4 / m2^2 - 3.
double excess_kurtosis(std::span<const double> x);
std::vector<double> to_double(std::span<const std::int64_t> counts);

// Reference distributions ---------------------------------------------------

double normal_cdf(double z);
double normal_quantile(double p);
double chi_squared_cdf(double x, double df);
double chi_squared_sf(double x, double df);
/// Asymptotic Kolmogorov distribution P(K > x) = 2 Σ (-1)^{k-1} exp(-2 k^2 x^2).
double kolmogorov_sf(double x);
double poisson_pmf(std::int64_t k, double mean);

/// One-sample KS statistic of x against the standard normal CDF.
double ks_statistic_normal(std::span<const double> x);
/// Samples centred by their mean and scaled by their standard deviation.
std::vector<double> standardize(std::span<const double> x);

// Poisson proxies -----------------------------------------------------------

/// Index of dispersion D = s^2 / mean; two-sided test of (n-1) D against
/// chi-squared with n - 1 degrees of freedom. Needs at least 100 counts.
TestReport dispersion_test(std::span<const std::int64_t> counts, double level = 0.01);

/// Chi-squared goodness of fit against Poisson(mean), tail bins merged until
/// each expected count is at least 5. When `mean_estimated` the degrees of
/// freedom drop by one.
TestReport poisson_gof(std::span<const std::int64_t> counts, double mean, double level = 0.01,
                       bool mean_estimated = false);

/// Pairwise Pearson correlations of region counts, Fisher z against zero,
/// Bonferroni over pairs. Throws std::invalid_argument unless the regions
/// have pairwise disjoint interiors and there are at least two.
TestReport independence_test(const std::vector<std::vector<std::int64_t>>& region_counts,
                             const std::vector<Region2>& regions, double level = 0.01);

struct IntensityTolerance {
  double z = 3.0;           // standard errors allowed
  double relative = 0.05;   // additional budget as a fraction of the reference
};

/// Per-region empirical mean against a reference intensity: passes when
/// |mean - ref| <= z * se + relative * ref for every region.
TestReport local_intensity_check(const std::vector<std::vector<std::int64_t>>& region_counts,
                                 std::span<const double> references, IntensityTolerance tol = {},
                                 double level = 0.01);

// Normal approximation ------------------------------------------------------

struct CltOptions {
  double level = 0.01;
  double variance_tolerance = 0.10;    // relative, diagonal entries
  double covariance_tolerance = 0.15;  // relative, off-diagonal entry
};

/// (a) sample covariance of (F1, F2) against sigma_ref entrywise (skipped when
/// absent); (b) KS of each standardized marginal against N(0,1); (c)
/// D'Agostino skewness and Anscombe-Glynn kurtosis z-tests per marginal.
/// Sub-tests (b) and (c) share `level` by Bonferroni. Needs 500 samples.
TestReport clt_test(std::span<const double> f1, std::span<const double> f2, const std::optional<Matrix2>& sigma_ref,
                    const CltOptions& options = {});

/// Serialise a report (and its sub-tests) as one JSON object per line.
std::string to_json_line(const TestReport& report);

}  // namespace rggx
