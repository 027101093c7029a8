#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace fpp {

using Point = std::array<double, 3>;  // unused trailing coordinates are zero

[[nodiscard]] double dot(const Point& a, const Point& b) noexcept;
[[nodiscard]] double norm(const Point& a) noexcept;

// Convex hull of planar points (x, y), counter-clockwise, without collinear points.
[[nodiscard]] std::vector<Point> convex_hull_2d(std::vector<Point> pts);

// Euclidean distance from a point to a convex polygon (0 inside or on the boundary).
[[nodiscard]] double point_polygon_distance(const Point& p, std::span<const Point> polygon);

// Hausdorff distance between two convex polygons: the larger of the two directed
// vertex-to-polygon maxima, which is exact for convex sets.
[[nodiscard]] double polygon_hausdorff(std::span<const Point> a, std::span<const Point> b);

// max_i <p_i, u>.
[[nodiscard]] double support(std::span<const Point> pts, const Point& u) noexcept;

// `count` equally spaced unit vectors in the plane, starting at (1, 0).
[[nodiscard]] std::vector<Point> circle_directions(std::size_t count);

// Unit vertices of a subdivided icosahedron: 12, 42, 162, 642, ... for levels 0, 1, 2, 3.
[[nodiscard]] std::vector<Point> icosphere_directions(int level);

// Largest angle between a unit vector and its nearest neighbour in the set.
[[nodiscard]] double max_neighbour_angle(std::span<const Point> dirs);

}  // namespace fpp
