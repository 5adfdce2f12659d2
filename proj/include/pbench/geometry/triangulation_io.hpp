#pragma once

#include <string>
#include <string_view>

#include "pbench/geometry/relief.hpp"
#include "pbench/geometry/triangulation.hpp"

namespace pbench {

// Triangulation file: two CSV sections, each introduced by a marker line.
//
//   #points
//   px,py
//   12.5,40
//   ...
//   #triangles
//   i,j,k
//   0,1,2
//   ...
std::string write_triangulation_csv(const Triangulation& tri);
Triangulation parse_triangulation_csv(std::string_view text);

/// `vertex,px,py,z`, one row per vertex.
std::string write_relief_csv(const Triangulation& tri, const ReliefSurface& surface);

}  // namespace pbench
