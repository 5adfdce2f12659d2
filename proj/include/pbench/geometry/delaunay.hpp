#pragma once

#include <span>

#include "pbench/geometry/triangulation.hpp"

namespace pbench {

/// Delaunay triangulation of distinct, not-all-collinear points.
///
/// Points keep their input indices. Internally they are swept in
/// lexicographic (x, y) order to build an initial triangulation of the convex
/// hull, which is then legalized by edge flips. When the four vertices of a
/// quadrilateral are co-circular (within a relative tolerance) the diagonal
/// incident to the lowest vertex index wins. Triangles are emitted with
/// positive signed area in pixel coordinates, rotated so the smallest index
/// comes first, and sorted lexicographically. Collinear points on the hull
/// boundary are kept as vertices.
///
/// Throws InvalidInput for fewer than 3 points, duplicates, non-finite
/// coordinates, or an all-collinear set.
Triangulation delaunay_triangulate(std::span<const Point2> points);

/// Signed incircle determinant of d against triangle (a, b, c); positive when
/// d is strictly inside for a positively oriented triangle.
double incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) noexcept;
double orient2d(const Point2& a, const Point2& b, const Point2& c) noexcept;

}  // namespace pbench
