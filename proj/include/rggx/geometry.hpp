#pragma once

// Deterministic geometric substrate: observation windows in R^d, projection
// onto a 2-plane, fibre (slice) measures over the plane, and region queries.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rggx {

/// Raised for window/plane/parameter combinations the library cannot evaluate.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// A single point of R^d.
using PointD = std::vector<double>;

/// Flat, row-major storage for a set of points of a fixed dimension.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(int dimension) : dim_(dimension) {}
  PointSet(int dimension, std::vector<double> coords);

  int dimension() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / static_cast<std::size_t>(dim_); }
  bool empty() const { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  std::span<double> mutable_point(std::size_t i) {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }

  void push_back(std::span<const double> p);
  void reserve(std::size_t n) { coords_.reserve(n * static_cast<std::size_t>(dim_)); }
  const std::vector<double>& coords() const { return coords_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  int dim_ = 0;
  std::vector<double> coords_;
};

/// Volume of the n-dimensional unit ball, pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(int n);

enum class WindowKind { cube, ball };

/// Unit-volume convex body: the cube [0,1]^d or the origin-centred ball of
/// radius kappa_d^{-1/d}.
class Window {
 public:
  static Window cube(int dimension);
  static Window ball(int dimension);

  WindowKind kind() const { return kind_; }
  int dimension() const { return dim_; }
  /// Side length for the cube, radius for the ball.
  double scale() const { return scale_; }

  bool contains(std::span<const double> x) const;
  /// Axis-aligned box [lo, hi]^d containing the window.
  double box_lo() const { return kind_ == WindowKind::cube ? 0.0 : -scale_; }
  double box_hi() const { return kind_ == WindowKind::cube ? 1.0 : scale_; }

  std::string name() const { return kind_ == WindowKind::cube ? "cube" : "ball"; }

  friend bool operator==(const Window&, const Window&) = default;

 private:
  Window(WindowKind kind, int dim, double scale) : kind_(kind), dim_(dim), scale_(scale) {}

  WindowKind kind_;
  int dim_;
  double scale_;
};

/// Orthonormal basis {b1, b2} of a 2-plane L in R^d.
class ProjectionPlane {
 public:
  /// The plane spanned by the first two coordinate axes.
  static ProjectionPlane standard(int dimension);
  /// The plane spanned by coordinate axes `first` and `second`.
  static ProjectionPlane axes(int dimension, int first, int second);
  /// Arbitrary orthonormal basis; throws ConfigurationError unless both vectors
  /// are unit length and orthogonal to 1e-12.
  static ProjectionPlane from_basis(PointD b1, PointD b2);

  int dimension() const { return static_cast<int>(b1_.size()); }
  const PointD& b1() const { return b1_; }
  const PointD& b2() const { return b2_; }
  /// Axis indices when the plane is spanned by two coordinate axes.
  std::optional<std::pair<int, int>> coordinate_axes() const { return axes_; }

  friend bool operator==(const ProjectionPlane&, const ProjectionPlane&) = default;

 private:
  ProjectionPlane(PointD b1, PointD b2, std::optional<std::pair<int, int>> axes)
      : b1_(std::move(b1)), b2_(std::move(b2)), axes_(axes) {}

  PointD b1_;
  PointD b2_;
  std::optional<std::pair<int, int>> axes_;
};

Point2 project(std::span<const double> p, const ProjectionPlane& plane);
std::vector<Point2> project_all(const PointSet& points, const ProjectionPlane& plane);

struct Rectangle {
  Point2 lo;
  Point2 hi;
  friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

struct Disk {
  Point2 center;
  double radius = 0.0;
  friend bool operator==(const Disk&, const Disk&) = default;
};

struct FullPlane {
  friend bool operator==(const FullPlane&, const FullPlane&) = default;
};

/// Closed region of the projection plane: rectangle, disk, or the whole plane.
class Region2 {
 public:
  static Region2 rectangle(Point2 lo, Point2 hi);
  static Region2 disk(Point2 center, double radius);
  static Region2 full_plane() { return Region2(FullPlane{}); }

  bool contains(Point2 p) const;
  bool is_full_plane() const { return std::holds_alternative<FullPlane>(shape_); }
  /// Bounding box, absent for the full plane.
  std::optional<Rectangle> bounds() const;
  const std::variant<Rectangle, Disk, FullPlane>& shape() const { return shape_; }

  /// True when the interiors of the two regions do not meet.
  bool interior_disjoint(const Region2& other) const;

  std::string describe() const;

  friend bool operator==(const Region2&, const Region2&) = default;

 private:
  explicit Region2(std::variant<Rectangle, Disk, FullPlane> shape) : shape_(std::move(shape)) {}

  std::variant<Rectangle, Disk, FullPlane> shape_;
};

/// Bounding box of the projected window W|_L in plane coordinates.
Rectangle projected_bounds(const Window& w, const ProjectionPlane& plane);

/// (d-2)-volume of the slice (v + L^perp) ∩ W_{-erosion}, where W_{-erosion}
/// is the inner parallel set. The cube requires a coordinate-axis plane.
double fiber_measure(const Window& w, const ProjectionPlane& plane, Point2 v, double erosion = 0.0);

/// Infimum and supremum of fiber_measure(w, plane, ., erosion) over the closed
/// disk of the given radius around v.
struct FiberRange {
  double inf = 0.0;
  double sup = 0.0;
};
FiberRange fiber_range_over_disk(const Window& w, const ProjectionPlane& plane, Point2 v,
                                 double radius, double erosion = 0.0);

/// Midpoint-rule tensor grid, cells per axis.
struct QuadratureGrid {
  int nx = 1024;
  int ny = 1024;
};

/// Midpoint quadrature of an integrand over A ∩ bbox(W|_L). The grid spans
/// that intersection box; disk regions are applied as an indicator on cell
/// midpoints.
template <class F>
double integrate_over_region(const Window& w, const ProjectionPlane& plane, const Region2& region,
                             QuadratureGrid grid, F&& integrand);

/// ∫_A fiber_measure(v)^2 dv by midpoint quadrature.
double fiber_sq_integral(const Window& w, const ProjectionPlane& plane, const Region2& region,
                         QuadratureGrid grid = {});

/// ∫_A fiber_measure(v) dv by midpoint quadrature (equals λ_d(W) for the full plane).
double fiber_integral(const Window& w, const ProjectionPlane& plane, const Region2& region,
                      QuadratureGrid grid = {});

/// True iff the closed delta-ball around x lies inside W.
bool inner_parallel_contains(const Window& w, std::span<const double> x, double delta);

// ---------------------------------------------------------------------------

namespace detail {
std::optional<Rectangle> clip_box(const Rectangle& box, const Region2& region);
void check_grid(QuadratureGrid grid);
}  // namespace detail

template <class F>
double integrate_over_region(const Window& w, const ProjectionPlane& plane, const Region2& region,
                             QuadratureGrid grid, F&& integrand) {
  detail::check_grid(grid);
  const auto box = detail::clip_box(projected_bounds(w, plane), region);
  if (!box) return 0.0;
  const double hx = (box->hi.x - box->lo.x) / grid.nx;
  const double hy = (box->hi.y - box->lo.y) / grid.ny;
  if (hx <= 0.0 || hy <= 0.0) return 0.0;
  const bool needs_mask = std::holds_alternative<Disk>(region.shape());
  double total = 0.0;
  for (int i = 0; i < grid.nx; ++i) {
    double row = 0.0;
    const double x = box->lo.x + (i + 0.5) * hx;
    for (int j = 0; j < grid.ny; ++j) {
      const Point2 v{x, box->lo.y + (j + 0.5) * hy};
      if (needs_mask && !region.contains(v)) continue;
      row += integrand(v);
    }
    total += row;
  }
  return total * hx * hy;
}

}  // namespace rggx
