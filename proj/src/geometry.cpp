#include "rggx/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace rggx {

namespace {

constexpr double kOrthonormalTol = 1e-12;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

void require_dimension(int d) {
  if (d < 3) throw ConfigurationError("window dimension must be at least 3, got " + std::to_string(d));
}

// Slice volume of an origin-centred d-ball of radius r at planar offset rho.
double ball_slice(int d, double r, double rho) {
  if (r <= 0.0 || rho > r) return 0.0;
  const double h2 = r * r - rho * rho;
  return unit_ball_volume(d - 2) * std::pow(std::max(h2, 0.0), 0.5 * (d - 2));
}

}  // namespace

PointSet::PointSet(int dimension, std::vector<double> coords) : dim_(dimension), coords_(std::move(coords)) {
  if (dim_ <= 0 || coords_.size() % static_cast<std::size_t>(dim_) != 0)
    throw std::invalid_argument("PointSet: coordinate count is not a multiple of the dimension");
}

void PointSet::push_back(std::span<const double> p) {
  if (static_cast<int>(p.size()) != dim_) throw std::invalid_argument("PointSet: dimension mismatch");
  coords_.insert(coords_.end(), p.begin(), p.end());
}

double unit_ball_volume(int n) {
  if (n < 0) throw std::invalid_argument("unit_ball_volume: negative dimension");
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

Window Window::cube(int dimension) {
  require_dimension(dimension);
  return Window(WindowKind::cube, dimension, 1.0);
}

Window Window::ball(int dimension) {
  require_dimension(dimension);
  return Window(WindowKind::ball, dimension, std::pow(unit_ball_volume(dimension), -1.0 / dimension));
}

bool Window::contains(std::span<const double> x) const {
  if (kind_ == WindowKind::cube) {
    return std::all_of(x.begin(), x.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
  }
  return dot(x, x) <= scale_ * scale_;
}

ProjectionPlane ProjectionPlane::standard(int dimension) { return axes(dimension, 0, 1); }

ProjectionPlane ProjectionPlane::axes(int dimension, int first, int second) {
  if (dimension < 2 || first == second || first < 0 || second < 0 || first >= dimension ||
      second >= dimension)
    throw ConfigurationError("invalid coordinate axes for projection plane");
  PointD b1(static_cast<std::size_t>(dimension), 0.0);
  PointD b2(static_cast<std::size_t>(dimension), 0.0);
  b1[static_cast<std::size_t>(first)] = 1.0;
  b2[static_cast<std::size_t>(second)] = 1.0;
  return ProjectionPlane(std::move(b1), std::move(b2), std::make_pair(first, second));
}

ProjectionPlane ProjectionPlane::from_basis(PointD b1, PointD b2) {
  if (b1.size() != b2.size() || b1.size() < 2) throw ConfigurationError("projection basis dimension mismatch");
  if (std::abs(dot(b1, b1) - 1.0) > kOrthonormalTol || std::abs(dot(b2, b2) - 1.0) > kOrthonormalTol ||
      std::abs(dot(b1, b2)) > kOrthonormalTol)
    throw ConfigurationError("projection basis is not orthonormal");
  // Recognise coordinate-axis planes given explicitly.
  auto axis_of = [](const PointD& b) -> std::optional<int> {
    std::optional<int> hit;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (b[k] == 1.0) {
        if (hit) return std::nullopt;
        hit = static_cast<int>(k);
      } else if (b[k] != 0.0) {
        return std::nullopt;
      }
    }
    return hit;
  };
  std::optional<std::pair<int, int>> axes;
  const auto a1 = axis_of(b1);
  const auto a2 = axis_of(b2);
  if (a1 && a2) axes = std::make_pair(*a1, *a2);
  return ProjectionPlane(std::move(b1), std::move(b2), axes);
}

Point2 project(std::span<const double> p, const ProjectionPlane& plane) {
  if (const auto ax = plane.coordinate_axes()) {
    return {p[static_cast<std::size_t>(ax->first)], p[static_cast<std::size_t>(ax->second)]};
  }
  return {dot(p, plane.b1()), dot(p, plane.b2())};
}

std::vector<Point2> project_all(const PointSet& points, const ProjectionPlane& plane) {
  std::vector<Point2> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out.push_back(project(points[i], plane));
  return out;
}

Region2 Region2::rectangle(Point2 lo, Point2 hi) {
  if (!(lo.x <= hi.x && lo.y <= hi.y)) throw std::invalid_argument("rectangle requires lo <= hi componentwise");
  return Region2(Rectangle{lo, hi});
}

Region2 Region2::disk(Point2 center, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("disk radius must be non-negative");
  return Region2(Disk{center, radius});
}

bool Region2::contains(Point2 p) const {
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Rectangle>) {
          return p.x >= s.lo.x && p.x <= s.hi.x && p.y >= s.lo.y && p.y <= s.hi.y;
        } else if constexpr (std::is_same_v<T, Disk>) {
          const double dx = p.x - s.center.x;
          const double dy = p.y - s.center.y;
          return dx * dx + dy * dy <= s.radius * s.radius;
        } else {
          return true;
        }
      },
      shape_);
}

std::optional<Rectangle> Region2::bounds() const {
  if (const auto* r = std::get_if<Rectangle>(&shape_)) return *r;
  if (const auto* d = std::get_if<Disk>(&shape_)) {
    return Rectangle{{d->center.x - d->radius, d->center.y - d->radius},
                     {d->center.x + d->radius, d->center.y + d->radius}};
  }
  return std::nullopt;
}

bool Region2::interior_disjoint(const Region2& other) const {
  if (is_full_plane() || other.is_full_plane()) return false;
  const auto* r1 = std::get_if<Rectangle>(&shape_);
  const auto* r2 = std::get_if<Rectangle>(&other.shape_);
  const auto* d1 = std::get_if<Disk>(&shape_);
  const auto* d2 = std::get_if<Disk>(&other.shape_);
  auto rect_disk = [](const Rectangle& r, const Disk& d) {
    const double cx = std::clamp(d.center.x, r.lo.x, r.hi.x);
    const double cy = std::clamp(d.center.y, r.lo.y, r.hi.y);
    const double dx = d.center.x - cx;
    const double dy = d.center.y - cy;
    return dx * dx + dy * dy >= d.radius * d.radius;
  };
  if (r1 && r2) {
    return r1->hi.x <= r2->lo.x || r2->hi.x <= r1->lo.x || r1->hi.y <= r2->lo.y || r2->hi.y <= r1->lo.y;
  }
  if (d1 && d2) {
    const double dx = d1->center.x - d2->center.x;
    const double dy = d1->center.y - d2->center.y;
    return std::hypot(dx, dy) >= d1->radius + d2->radius;
  }
  if (r1 && d2) return rect_disk(*r1, *d2);
  return rect_disk(*r2, *d1);
}

std::string Region2::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Rectangle>) {
          os << "rectangle[(" << s.lo.x << "," << s.lo.y << ")-(" << s.hi.x << "," << s.hi.y << ")]";
        } else if constexpr (std::is_same_v<T, Disk>) {
          os << "disk[(" << s.center.x << "," << s.center.y << ") r=" << s.radius << "]";
        } else {
          os << "full-plane";
        }
      },
      shape_);
  return os.str();
}

Rectangle projected_bounds(const Window& w, const ProjectionPlane& plane) {
  if (w.dimension() != plane.dimension()) throw ConfigurationError("window and plane dimensions differ");
  if (w.kind() == WindowKind::ball) {
    const double r = w.scale();
    return {{-r, -r}, {r, r}};
  }
  if (!plane.coordinate_axes()) throw ConfigurationError("cube window requires a coordinate-axis projection plane");
  return {{0.0, 0.0}, {1.0, 1.0}};
}

double fiber_measure(const Window& w, const ProjectionPlane& plane, Point2 v, double erosion) {
  if (w.dimension() != plane.dimension()) throw ConfigurationError("window and plane dimensions differ");
  if (erosion < 0.0) throw std::invalid_argument("erosion must be non-negative");
  const int d = w.dimension();
  if (w.kind() == WindowKind::ball) return ball_slice(d, w.scale() - erosion, std::hypot(v.x, v.y));
  if (!plane.coordinate_axes()) throw ConfigurationError("cube window requires a coordinate-axis projection plane");
  const double lo = erosion;
  const double hi = 1.0 - erosion;
  if (hi < lo) return 0.0;
  if (v.x < lo || v.x > hi || v.y < lo || v.y > hi) return 0.0;
  return erosion == 0.0 ? 1.0 : std::pow(hi - lo, d - 2);
}

FiberRange fiber_range_over_disk(const Window& w, const ProjectionPlane& plane, Point2 v, double radius,
                                 double erosion) {
  if (radius < 0.0) throw std::invalid_argument("radius must be non-negative");
  const int d = w.dimension();
  if (w.kind() == WindowKind::ball) {
    // The slice volume is radially non-increasing.
    const double rho = std::hypot(v.x, v.y);
    const double r = w.scale() - erosion;
    return {ball_slice(d, r, rho + radius), ball_slice(d, r, std::max(0.0, rho - radius))};
  }
  if (!plane.coordinate_axes()) throw ConfigurationError("cube window requires a coordinate-axis projection plane");
  const double lo = erosion;
  const double hi = 1.0 - erosion;
  if (hi < lo) return {0.0, 0.0};
  const double height = std::pow(hi - lo, d - 2);
  // Disk inside the square: x and y margins both at least the radius.
  const bool inside = v.x - radius >= lo && v.x + radius <= hi && v.y - radius >= lo && v.y + radius <= hi;
  const double dx = std::max({lo - v.x, 0.0, v.x - hi});
  const double dy = std::max({lo - v.y, 0.0, v.y - hi});
  const bool meets = dx * dx + dy * dy <= radius * radius;
  return {inside ? height : 0.0, meets ? height : 0.0};
}

namespace detail {

std::optional<Rectangle> clip_box(const Rectangle& box, const Region2& region) {
  const auto rb = region.bounds();
  if (!rb) return box;
  Rectangle out{{std::max(box.lo.x, rb->lo.x), std::max(box.lo.y, rb->lo.y)},
                {std::min(box.hi.x, rb->hi.x), std::min(box.hi.y, rb->hi.y)}};
  if (out.lo.x > out.hi.x || out.lo.y > out.hi.y) return std::nullopt;
  return out;
}

void check_grid(QuadratureGrid grid) {
  if (grid.nx <= 0 || grid.ny <= 0) throw std::invalid_argument("quadrature resolution must be positive");
}

}  // namespace detail

double fiber_sq_integral(const Window& w, const ProjectionPlane& plane, const Region2& region, QuadratureGrid grid) {
  return integrate_over_region(w, plane, region, grid, [&](Point2 v) {
    const double f = fiber_measure(w, plane, v);
    return f * f;
  });
}

double fiber_integral(const Window& w, const ProjectionPlane& plane, const Region2& region, QuadratureGrid grid) {
  return integrate_over_region(w, plane, region, grid, [&](Point2 v) { return fiber_measure(w, plane, v); });
}

bool inner_parallel_contains(const Window& w, std::span<const double> x, double delta) {
  if (delta < 0.0) throw std::invalid_argument("delta must be non-negative");
  if (w.kind() == WindowKind::cube) {
    return std::all_of(x.begin(), x.end(), [&](double v) { return v >= delta && v <= 1.0 - delta; });
  }
  return std::sqrt(dot(x, x)) <= w.scale() - delta;
}

}  // namespace rggx
