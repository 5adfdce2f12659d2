#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace pbench {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

using Triangle = std::array<std::size_t, 3>;

/// Image-plane points (pixels, x right, y down) and vertex-index triples over
/// them. Construct through make_triangulation() or delaunay_triangulate();
/// both validate.
struct Triangulation {
  std::vector<Point2> points;
  std::vector<Triangle> triangles;

  std::size_t vertex_count() const noexcept { return points.size(); }
  std::size_t triangle_count() const noexcept { return triangles.size(); }
  friend bool operator==(const Triangulation&, const Triangulation&) = default;
};

/// Checks index ranges and rejects zero-area triangles. Throws InvalidInput.
Triangulation make_triangulation(std::vector<Point2> points, std::vector<Triangle> triangles);

/// Per-triangle arithmetic mean of the three vertices.
std::vector<Point2> barycentres(const Triangulation& tri);

}  // namespace pbench
