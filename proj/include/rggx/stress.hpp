#pragma once

#include <span>
#include <vector>

#include "rggx/geometry.hpp"

namespace rggx {

enum class WeightKind { inverse_sq, unit, table };

/// Pair weight w(v1, v2) as a function of the ambient distance d0, together
/// with a bound s on the pair stress S = w (d0 - d1)^2.
class StressWeight {
 public:
  /// w = 1 / d0^2, so S = (1 - d1/d0)^2 and s = 1.
  static StressWeight inverse_sq() { return StressWeight(WeightKind::inverse_sq, {}, {}, 1.0); }
  /// w = 1; the caller supplies the bound (for instance diam(W)^2).
  static StressWeight unit(double bound);
  /// Piecewise-constant weight: values[k] applies for d0 <= breaks[k]
  /// (breaks increasing); beyond the last break the weight is zero.
  static StressWeight table(std::vector<double> breaks, std::vector<double> values, double bound);

  WeightKind kind() const { return kind_; }
  double bound() const { return bound_; }
  double weight(double d0) const;
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const StressWeight&, const StressWeight&) = default;

 private:
  StressWeight(WeightKind kind, std::vector<double> breaks, std::vector<double> values, double bound)
      : kind_(kind), breaks_(std::move(breaks)), values_(std::move(values)), bound_(bound) {}

  WeightKind kind_;
  std::vector<double> breaks_;
  std::vector<double> values_;
  double bound_;
};

/// S(v1, v2) = w(v1, v2) (d0 - d1)^2 with d0 the ambient and d1 the projected
/// distance. Throws std::invalid_argument when v1 == v2.
double pair_stress(std::span<const double> v1, std::span<const double> v2, const ProjectionPlane& plane,
                   const StressWeight& weight);

/// Sum of pair_stress over unordered pairs of distinct points. Blocked
/// iteration with a fixed pairwise reduction order, so the result is
/// reproducible bit-for-bit.
double stress_total(const PointSet& points, const ProjectionPlane& plane, const StressWeight& weight);

}  // namespace rggx
