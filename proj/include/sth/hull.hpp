#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sth::hull {

/// Andrew's monotone chain. Returns the extreme points counterclockwise,
/// starting from the lowest-leftmost one. Points within `rel_tol` (relative
/// to the squared extent of the set) of being collinear with their
/// neighbours are dropped.
std::vector<Eigen::Vector2d> convex_hull_2d(std::span<const Eigen::Vector2d> points,
                                            double rel_tol = 1e-12);

/// Triangulated boundary of a 3D convex hull. Faces are outward oriented.
struct Hull3d {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;

  /// Divergence-theorem volume of the closed triangulation.
  [[nodiscard]] double volume() const;
  /// True if p is inside or on the hull within tol (absolute).
  [[nodiscard]] bool contains(const Eigen::Vector3d& p, double tol) const;
};

/// Incremental convex hull. Returns an empty hull when the points do not
/// span three dimensions (within rel_tol of the set's extent).
Hull3d convex_hull_3d(std::span<const Eigen::Vector3d> points, double rel_tol = 1e-10);

}  // namespace sth::hull
