#include "rggx/theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rggx/predicates.hpp"

namespace rggx {

namespace {

void require_d(int d) {
  if (d < 3) throw std::invalid_argument("limit constants need d >= 3");
}

// Uniform point of the unit d-ball, projected onto its first two coordinates.
Point2 ball_projection(int d, RngStream& rng) {
  double norm2 = 0.0;
  double x = 0.0;
  double y = 0.0;
  for (int k = 0; k < d; ++k) {
    const double z = rng.normal();
    norm2 += z * z;
    if (k == 0) x = z;
    if (k == 1) y = z;
  }
  const double scale = std::pow(rng.uniform_open(), 1.0 / d) / std::sqrt(norm2);
  return {x * scale, y * scale};
}

Point2 disk_point(double radius, RngStream& rng) {
  for (;;) {
    const double x = 2.0 * rng.uniform() - 1.0;
    const double y = 2.0 * rng.uniform() - 1.0;
    if (x * x + y * y <= 1.0) return {radius * x, radius * y};
  }
}

bool hits(Point2 x, Point2 y, Point2 z) {
  return segments_intersect({0.0, 0.0}, x, y, {y.x + z.x, y.y + z.y}).has_value();
}

McEstimate bernoulli_estimate(std::int64_t hits_count, std::int64_t n, double volume) {
  const double p = static_cast<double>(hits_count) / static_cast<double>(n);
  return {volume * p, volume * std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
}

// Generalised golden-ratio (R_d) sequence in [0,1)^d.
class KroneckerSequence {
 public:
  explicit KroneckerSequence(int d) : alpha_(static_cast<std::size_t>(d)) {
    double phi = 2.0;
    for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (d + 1));
    double a = 1.0;
    for (auto& v : alpha_) {
      a /= phi;
      v = a;
    }
  }
  void point(std::int64_t n, std::span<double> out) const {
    for (std::size_t k = 0; k < alpha_.size(); ++k) {
      const double v = 0.5 + static_cast<double>(n + 1) * alpha_[k];
      out[k] = v - std::floor(v);
    }
  }

 private:
  std::vector<double> alpha_;
};

// Inner quadrature nodes for ∫_W f(u) du: points of W with a common weight.
struct InnerRule {
  PointSet nodes;
  std::vector<Point2> projected;
  double weight = 0.0;
};

InnerRule make_inner_rule(const Window& w, const ProjectionPlane& plane, int n_points) {
  if (n_points <= 0) throw std::invalid_argument("inner quadrature needs a positive point count");
  const int d = w.dimension();
  KroneckerSequence seq(d);
  InnerRule rule;
  rule.nodes = PointSet(d);
  std::vector<double> u(static_cast<std::size_t>(d));
  const double lo = w.box_lo();
  const double side = w.box_hi() - w.box_lo();
  for (std::int64_t n = 0; n < n_points; ++n) {
    seq.point(n, u);
    for (auto& c : u) c = lo + side * c;
    if (w.contains(u)) rule.nodes.push_back(u);
  }
  rule.weight = std::pow(side, d) / n_points;
  rule.projected = project_all(rule.nodes, plane);
  return rule;
}

double s1_with_rule(std::span<const double> v, const ProjectionPlane& plane, const InnerRule& rule) {
  const Point2 pv = project(v, plane);
  const std::size_t ud = v.size();
  double total = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const auto u = rule.nodes[j];
    double d0sq = 0.0;
    for (std::size_t k = 0; k < ud; ++k) d0sq += (v[k] - u[k]) * (v[k] - u[k]);
    if (d0sq == 0.0) continue;
    const double dx = pv.x - rule.projected[j].x;
    const double dy = pv.y - rule.projected[j].y;
    const double r = std::min(1.0, std::sqrt((dx * dx + dy * dy) / d0sq));
    total += (1.0 - r) * (1.0 - r);
  }
  return total * rule.weight;
}

}  // namespace

std::string to_string(ConstantSet set) { return set == ConstantSet::published ? "published" : "integral"; }

ConstantSet constant_set_from_string(const std::string& name) {
  if (name == "published") return ConstantSet::published;
  if (name == "integral") return ConstantSet::integral;
  throw std::invalid_argument("unknown constant set '" + name + "' (expected published or integral)");
}

double beta_function(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("beta function needs positive arguments");
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double c_d_closed(int d) {
  require_d(d);
  const double kappa = unit_ball_volume(d - 2);
  const double b = beta_function(3.0, 0.5 * d);
  return 8.0 * std::numbers::pi * kappa * kappa * b * b;
}

double c_d_prime_closed(int d) {
  require_d(d);
  const double kappa = unit_ball_volume(d - 2);
  const double b3 = beta_function(3.0, 0.5 * d);
  return std::numbers::pi * kappa * kappa * kappa * b3 * b3 * beta_function(4.0, 0.5 * d);
}

double c_d_integral(int d) {
  require_d(d);
  // (2/π) (∫_{B_d} |x_L| dx)^2 with ∫_{B_d} |x_L| dx = π κ_{d-2} B(3/2, d/2).
  const double kappa = unit_ball_volume(d - 2);
  const double b = beta_function(1.5, 0.5 * d);
  return 2.0 * std::numbers::pi * kappa * kappa * b * b;
}

double c_d_prime_integral(int d) {
  require_d(d);
  // ∫_{B_d} |x_L|^2 (2 κ_{d-2} B(3/2, d/2))^2 dx with ∫|x_L|^2 = π κ_{d-2} B(2, d/2).
  const double kappa = unit_ball_volume(d - 2);
  const double b = beta_function(1.5, 0.5 * d);
  return 4.0 * std::numbers::pi * kappa * kappa * kappa * b * b * beta_function(2.0, 0.5 * d);
}

double c_d(int d, ConstantSet set) { return set == ConstantSet::published ? c_d_closed(d) : c_d_integral(d); }

double c_d_prime(int d, ConstantSet set) {
  return set == ConstantSet::published ? c_d_prime_closed(d) : c_d_prime_integral(d);
}

LimitConstants limit_constants(int d, ConstantSet set) {
  return {d, unit_ball_volume(d - 2), c_d(d, set), c_d_prime(d, set)};
}

McEstimate c_d_montecarlo(int d, std::int64_t n_samples, RngStream& rng) {
  require_d(d);
  if (n_samples < 1000) throw std::invalid_argument("c_d_montecarlo needs at least 1000 samples");
  std::int64_t count = 0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const Point2 w1 = ball_projection(d, rng);
    const Point2 w2 = ball_projection(d, rng);
    const Point2 w3 = disk_point(2.0, rng);
    if (hits(w1, w3, w2)) ++count;
  }
  const double kd = unit_ball_volume(d);
  return bernoulli_estimate(count, n_samples, kd * kd * 4.0 * std::numbers::pi);
}

McEstimate c_d_prime_montecarlo(int d, std::int64_t n_samples, RngStream& rng) {
  require_d(d);
  if (n_samples < 1000) throw std::invalid_argument("c_d_prime_montecarlo needs at least 1000 samples");
  std::int64_t count = 0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const Point2 x = ball_projection(d, rng);
    const Point2 z1 = ball_projection(d, rng);
    const Point2 z2 = ball_projection(d, rng);
    const Point2 y1 = disk_point(2.0, rng);
    const Point2 y2 = disk_point(2.0, rng);
    if (hits(x, y1, z1) && hits(x, y2, z2)) ++count;
  }
  const double kd = unit_ball_volume(d);
  const double disk = 4.0 * std::numbers::pi;
  return bernoulli_estimate(count, n_samples, kd * kd * kd * disk * disk);
}

double limit_intensity(const Window& w, const ProjectionPlane& plane, double c, const Region2& region,
                       ConstantSet set, QuadratureGrid grid) {
  if (!(c > 0.0)) throw std::invalid_argument("limit_intensity needs c > 0");
  return 0.125 * c_d(w.dimension(), set) * c * c * fiber_sq_integral(w, plane, region, grid);
}

double expected_crossings_leading(const Window& w, const ProjectionPlane& plane, double t, double delta,
                                  const Region2& region, ConstantSet set, QuadratureGrid grid) {
  if (!(t > 0.0) || delta < 0.0) throw std::invalid_argument("expected_crossings_leading needs t > 0, delta >= 0");
  if (delta == 0.0) return 0.0;
  const int d = w.dimension();
  const double scale = std::pow(t, 4) * std::pow(delta, 2 * d + 2);
  return 0.125 * c_d(d, set) * scale * fiber_sq_integral(w, plane, region, grid);
}

IntensityBounds intensity_bounds(const Window& w, const ProjectionPlane& plane, double t, double delta,
                                 const Region2& region, ConstantSet set, QuadratureGrid grid) {
  detail::check_grid(grid);
  if (!(t > 0.0) || !(delta > 0.0)) throw std::invalid_argument("intensity_bounds needs t, delta > 0");
  const int d = w.dimension();
  const double reach = 4.0 * delta;
  Rectangle box = projected_bounds(w, plane);
  box.lo.x -= reach;
  box.lo.y -= reach;
  box.hi.x += reach;
  box.hi.y += reach;
  const auto clipped = detail::clip_box(box, region);
  if (!clipped) return {};
  const double hx = (clipped->hi.x - clipped->lo.x) / grid.nx;
  const double hy = (clipped->hi.y - clipped->lo.y) / grid.ny;
  double lower = 0.0;
  double upper = 0.0;
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      const Point2 v{clipped->lo.x + (i + 0.5) * hx, clipped->lo.y + (j + 0.5) * hy};
      if (!region.contains(v)) continue;
      const double inf = fiber_range_over_disk(w, plane, v, reach, 3.0 * delta).inf;
      const double sup = fiber_range_over_disk(w, plane, v, reach, 0.0).sup;
      lower += inf * inf;
      upper += sup * sup;
    }
  }
  const double scale = 0.125 * c_d(d, set) * std::pow(t, 4) * std::pow(delta, 2 * d + 2) * hx * hy;
  return {lower * scale, upper * scale};
}

double cube_variance_crossings(int d, double t, double c, ConstantSet set) {
  if (!(t > 0.0) || !(c > 0.0)) throw std::invalid_argument("cube_variance_crossings needs t, c > 0");
  const double delta = std::pow(c / t, 1.0 / d);
  const double cd = c_d(d, set);
  return 0.125 * std::pow(c, 4) * std::pow(t, 3) * std::pow(delta, 4) * (2.0 * cd * cd + c_d_prime(d, set) / c);
}

double stress_profile_S1(const Window& w, const ProjectionPlane& plane, std::span<const double> v,
                         const StressQuadrature& quad) {
  const auto rule = make_inner_rule(w, plane, quad.inner_points);
  return s1_with_rule(v, plane, rule);
}

StressIntegrals stress_integrals(const Window& w, const ProjectionPlane& plane, const StressQuadrature& quad) {
  if (quad.outer_per_axis <= 0) throw std::invalid_argument("outer quadrature needs a positive resolution");
  const int d = w.dimension();
  const auto rule = make_inner_rule(w, plane, quad.inner_points);
  const bool symmetric = w.kind() == WindowKind::cube && plane.coordinate_axes() && quad.outer_per_axis % 2 == 0;
  const int n = quad.outer_per_axis;
  const int span = symmetric ? n / 2 : n;
  const double lo = w.box_lo();
  const double h = (w.box_hi() - w.box_lo()) / n;
  const double cell = std::pow(h, d) * (symmetric ? std::pow(2.0, d) : 1.0);

  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> v(static_cast<std::size_t>(d));
  double s1 = 0.0;
  double s1sq = 0.0;
  for (;;) {
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = lo + (idx[k] + 0.5) * h;
    if (w.contains(v)) {
      const double val = s1_with_rule(v, plane, rule);
      s1 += val;
      s1sq += val * val;
    }
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == span) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return {s1 * cell, s1sq * cell, quad.outer_per_axis, quad.inner_points};
}

double cube_covariance_cross_stress(int d, double t, double c, double integral_s1, ConstantSet set) {
  if (!(t > 0.0) || !(c > 0.0)) throw std::invalid_argument("cube_covariance_cross_stress needs t, c > 0");
  const double delta = std::pow(c / t, 1.0 / d);
  return 0.5 * c_d(d, set) * std::pow(t, 5) * std::pow(delta, 2 * d + 2) * integral_s1;
}

CubeMoments cube_moments(int d, double t, double c, const StressIntegrals& integrals, ConstantSet set) {
  CubeMoments m;
  m.t = t;
  m.c = c;
  m.delta = std::pow(c / t, 1.0 / d);
  const double cd = c_d(d, set);
  m.exp_crossings = 0.125 * cd * std::pow(t, 4) * std::pow(m.delta, 2 * d + 2);
  m.var_crossings = cube_variance_crossings(d, t, c, set);
  m.var_stress = std::pow(t, 3) * integrals.integral_s1_sq;
  m.cov_cross_stress = cube_covariance_cross_stress(d, t, c, integrals.integral_s1, set);
  m.sigma[0][0] = 0.125 * (2.0 * cd * cd + c_d_prime(d, set) / c);
  m.sigma[1][1] = integrals.integral_s1_sq;
  m.sigma[0][1] = m.sigma[1][0] = 0.5 * cd * integrals.integral_s1;
  return m;
}

std::pair<double, double> normalize_F(int d, double t, double delta, double crossings, double stress,
                                      double exp_crossings, double exp_stress) {
  if (!(t > 0.0) || !(delta > 0.0)) throw std::invalid_argument("normalize_F needs t, delta > 0");
  const double s1 = std::pow(t, 3.5) * std::pow(delta, 2 * d + 2);
  const double s2 = std::pow(t, 1.5);
  return {(crossings - exp_crossings) / s1, (stress - exp_stress) / s2};
}

}  // namespace rggx
