#include "rggx/stress.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rggx {

namespace {

// Projection is 1-Lipschitz; allow only rounding slack.
constexpr double kLipschitzSlack = 1e-12;

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double stress_from_squares(double d0sq, double d1sq, const StressWeight& weight) {
  if (d0sq == 0.0) throw std::invalid_argument("pair stress undefined for coincident points");
  if (d1sq > d0sq * (1.0 + kLipschitzSlack)) throw std::logic_error("projected distance exceeds ambient distance");
  if (weight.kind() == WeightKind::inverse_sq) {
    const double r = std::min(1.0, std::sqrt(d1sq / d0sq));
    return (1.0 - r) * (1.0 - r);
  }
  const double d0 = std::sqrt(d0sq);
  const double d1 = std::min(d0, std::sqrt(d1sq));
  return weight.weight(d0) * (d0 - d1) * (d0 - d1);
}

}  // namespace

StressWeight StressWeight::unit(double bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("stress bound must be positive");
  return StressWeight(WeightKind::unit, {}, {}, bound);
}

StressWeight StressWeight::table(std::vector<double> breaks, std::vector<double> values, double bound) {
  if (breaks.empty() || breaks.size() != values.size()) throw std::invalid_argument("weight table sizes differ");
  if (!std::is_sorted(breaks.begin(), breaks.end())) throw std::invalid_argument("weight table breaks must increase");
  if (std::any_of(values.begin(), values.end(), [](double v) { return !(v >= 0.0) || !std::isfinite(v); }))
    throw std::invalid_argument("weight table values must be finite and non-negative");
  if (!(bound > 0.0)) throw std::invalid_argument("stress bound must be positive");
  return StressWeight(WeightKind::table, std::move(breaks), std::move(values), bound);
}

double StressWeight::weight(double d0) const {
  switch (kind_) {
    case WeightKind::inverse_sq: return 1.0 / (d0 * d0);
    case WeightKind::unit: return 1.0;
    case WeightKind::table: {
      const auto it = std::lower_bound(breaks_.begin(), breaks_.end(), d0);
      if (it == breaks_.end()) return 0.0;
      return values_[static_cast<std::size_t>(it - breaks_.begin())];
    }
  }
  return 0.0;
}

double pair_stress(std::span<const double> v1, std::span<const double> v2, const ProjectionPlane& plane,
                   const StressWeight& weight) {
  double d0sq = 0.0;
  for (std::size_t k = 0; k < v1.size(); ++k) d0sq += (v1[k] - v2[k]) * (v1[k] - v2[k]);
  const Point2 p = project(v1, plane);
  const Point2 q = project(v2, plane);
  const double d1sq = (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y);
  return stress_from_squares(d0sq, d1sq, weight);
}

double stress_total(const PointSet& points, const ProjectionPlane& plane, const StressWeight& weight) {
  const std::size_t n = points.size();
  if (n < 2) return 0.0;
  const auto proj = project_all(points, plane);
  const auto ud = static_cast<std::size_t>(points.dimension());
  const double* coords = points.coords().data();

  constexpr std::size_t kBlock = 256;
  std::vector<double> block_sums;
  block_sums.reserve((n / kBlock + 1) * (n / kBlock + 2) / 2);
  for (std::size_t bi = 0; bi < n; bi += kBlock) {
    const std::size_t ei = std::min(n, bi + kBlock);
    for (std::size_t bj = bi; bj < n; bj += kBlock) {
      const std::size_t ej = std::min(n, bj + kBlock);
      double s = 0.0;
      for (std::size_t i = bi; i < ei; ++i) {
        const double* pi = coords + i * ud;
        const Point2 qi = proj[i];
        for (std::size_t j = std::max(bj, i + 1); j < ej; ++j) {
          const double* pj = coords + j * ud;
          double d0sq = 0.0;
          for (std::size_t k = 0; k < ud; ++k) d0sq += (pi[k] - pj[k]) * (pi[k] - pj[k]);
          const double dx = qi.x - proj[j].x;
          const double dy = qi.y - proj[j].y;
          s += stress_from_squares(d0sq, dx * dx + dy * dy, weight);
        }
      }
      block_sums.push_back(s);
    }
  }
  return pairwise_sum(block_sums);
}

}  // namespace rggx
