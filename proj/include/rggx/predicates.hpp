#pragma once

#include <optional>

#include "rggx/geometry.hpp"

namespace rggx {

/// Sign of the orientation determinant of (a, b, c): +1 for a left turn,
/// -1 for a right turn, 0 when collinear. Exact for all finite double inputs
/// whose products neither overflow nor underflow; a floating-point filter
/// decides the common case and an expansion-arithmetic fallback the rest.
int orient2d(Point2 a, Point2 b, Point2 c);

/// Intersection of the closed segments [a1, a2] and [b1, b2].
///
/// The yes/no answer is exact (it depends only on orient2d signs). For a
/// transversal crossing the returned point is the unique intersection,
/// computed in floating point and clamped to the first segment. A touching
/// endpoint is returned as-is. Collinear overlaps return the midpoint of the
/// overlap interval.
std::optional<Point2> segments_intersect(Point2 a1, Point2 a2, Point2 b1, Point2 b2);

}  // namespace rggx
