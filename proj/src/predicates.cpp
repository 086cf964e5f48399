#include "rggx/predicates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace rggx {

namespace {

// Error-free transformations (Knuth two-sum, fma-based two-product).
struct Pair {
  double hi;
  double lo;
};

Pair two_sum(double a, double b) {
  const double s = a + b;
  const double bv = s - a;
  const double av = s - bv;
  return {s, (a - av) + (b - bv)};
}

Pair two_diff(double a, double b) {
  const double s = a - b;
  const double bv = a - s;
  const double av = s + bv;
  return {s, (a - av) + (bv - b)};
}

Pair two_product(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

// Adds `b` to a nonoverlapping expansion `e` (increasing magnitude), dropping
// zero components. Shewchuk's GROW-EXPANSION with zero elimination.
template <std::size_t N>
void grow_expansion(std::array<double, N>& e, std::size_t& len, double b) {
  std::size_t out = 0;
  double q = b;
  for (std::size_t i = 0; i < len; ++i) {
    const Pair s = two_sum(q, e[i]);
    q = s.hi;
    if (s.lo != 0.0) e[out++] = s.lo;
  }
  if (q != 0.0 || out == 0) e[out++] = q;
  len = out;
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

int orient2d_exact(Point2 a, Point2 b, Point2 c) {
  // det = (ax - cx)(by - cy) - (ay - cy)(bx - cx), each difference split
  // exactly into hi + lo and each product expanded term by term.
  const Pair acx = two_diff(a.x, c.x);
  const Pair bcy = two_diff(b.y, c.y);
  const Pair acy = two_diff(a.y, c.y);
  const Pair bcx = two_diff(b.x, c.x);

  std::array<double, 16> e{};
  std::size_t len = 0;
  auto add_product = [&](double u, double v, bool negate) {
    const Pair p = two_product(u, v);
    grow_expansion(e, len, negate ? -p.lo : p.lo);
    grow_expansion(e, len, negate ? -p.hi : p.hi);
  };
  for (double u : {acx.hi, acx.lo}) {
    for (double v : {bcy.hi, bcy.lo}) add_product(u, v, false);
  }
  for (double u : {acy.hi, acy.lo}) {
    for (double v : {bcx.hi, bcx.lo}) add_product(u, v, true);
  }
  // The most significant component carries the sign.
  return sign(e[len - 1]);
}

}  // namespace

int orient2d(Point2 a, Point2 b, Point2 c) {
  const double detleft = (a.x - c.x) * (b.y - c.y);
  const double detright = (a.y - c.y) * (b.x - c.x);
  const double det = detleft - detright;
  const double detsum = std::abs(detleft) + std::abs(detright);
  constexpr double eps = std::numeric_limits<double>::epsilon() / 2;
  // Shewchuk's ccwerrboundA.
  constexpr double bound = (3.0 + 16.0 * eps) * eps;
  if (std::abs(det) > bound * detsum) return sign(det);
  return orient2d_exact(a, b, c);
}

std::optional<Point2> segments_intersect(Point2 a1, Point2 a2, Point2 b1, Point2 b2) {
  const int o1 = orient2d(a1, a2, b1);
  const int o2 = orient2d(a1, a2, b2);
  const int o3 = orient2d(b1, b2, a1);
  const int o4 = orient2d(b1, b2, a2);

  if (o1 == 0 && o2 == 0 && o3 == 0 && o4 == 0) {
    // Collinear (or degenerate). Work along the axis of largest extent.
    const double ex = std::max({a1.x, a2.x, b1.x, b2.x}) - std::min({a1.x, a2.x, b1.x, b2.x});
    const double ey = std::max({a1.y, a2.y, b1.y, b2.y}) - std::min({a1.y, a2.y, b1.y, b2.y});
    auto key = [&](Point2 p) { return ex >= ey ? p.x : p.y; };
    auto by_key = [&](Point2 p, Point2 q) { return key(p) < key(q); };
    const Point2 amin = std::min(a1, a2, by_key);
    const Point2 amax = std::max(a1, a2, by_key);
    const Point2 bmin = std::min(b1, b2, by_key);
    const Point2 bmax = std::max(b1, b2, by_key);
    const Point2 lo = key(amin) >= key(bmin) ? amin : bmin;
    const Point2 hi = key(amax) <= key(bmax) ? amax : bmax;
    if (key(lo) > key(hi)) return std::nullopt;
    if (ex == 0.0 && ey == 0.0) return a1;  // all four points coincide
    return Point2{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
  }

  if (o1 * o2 > 0 || o3 * o4 > 0) return std::nullopt;

  if (o1 == 0) return b1;
  if (o2 == 0) return b2;
  if (o3 == 0) return a1;
  if (o4 == 0) return a2;

  const double rx = a2.x - a1.x;
  const double ry = a2.y - a1.y;
  const double sx = b2.x - b1.x;
  const double sy = b2.y - b1.y;
  const double denom = rx * sy - ry * sx;
  double s = ((b1.x - a1.x) * sy - (b1.y - a1.y) * sx) / denom;
  // Nearly parallel proper crossings can round denom to zero.
  s = std::isfinite(s) ? std::clamp(s, 0.0, 1.0) : 0.5;
  return Point2{a1.x + s * rx, a1.y + s * ry};
}

}  // namespace rggx
