#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "cardiofem/geometry.hpp"

namespace cardiofem {

enum class BoundaryLabel { inner, outer };

std::string_view to_string(BoundaryLabel label) noexcept;
BoundaryLabel parse_boundary_label(std::string_view text);

/// Closed polygon of wall points (the last point is not repeated).
/// At least three finite points; self-intersection is checked separately by
/// validate_simple() because angular ordering legitimately accepts point sets.
class Contour {
 public:
  Contour(std::vector<Point2> points, BoundaryLabel label);

  const std::vector<Point2>& points() const noexcept { return points_; }
  BoundaryLabel label() const noexcept { return label_; }
  std::size_t size() const noexcept { return points_.size(); }
  const Point2& operator[](std::size_t i) const { return points_[i]; }

 private:
  std::vector<Point2> points_;
  BoundaryLabel label_;
};

/// Throws ErrorKind::geometry when the contour, taken in its stored order,
/// self-intersects.
void validate_simple(const Contour& contour);

/// Inner and outer wall of one frame. The constructor checks labels, simplicity
/// of both polygons and that the inner polygon lies strictly inside the outer.
class FrameContours {
 public:
  FrameContours(std::size_t frame_index, Contour inner, Contour outer);

  std::size_t frame_index() const noexcept { return frame_index_; }
  const Contour& inner() const noexcept { return inner_; }
  const Contour& outer() const noexcept { return outer_; }

 private:
  std::size_t frame_index_;
  Contour inner_;
  Contour outer_;
};

struct BoundaryVector {
  Point2 position;  // on the t=0 contour
  Vec2 displacement;
};

struct BoundaryDisplacements {
  std::vector<BoundaryVector> inner_vectors;
  std::vector<BoundaryVector> outer_vectors;
  Point2 reference_center;
};

struct OrderedContour {
  Contour contour;
  /// permutation[i] is the input index of output point i.
  std::vector<std::size_t> permutation;
};

/// Two points closer than this in polar angle are treated as the same ray.
inline constexpr double angle_tie_tolerance = 1e-10;

/// Vertex arithmetic mean. Throws invalid_input on an empty point set.
Point2 centroid(std::span<const Point2> points);
Point2 centroid(const Contour& contour);

/// Sorts points by polar angle about `center`, starting at the smallest angle
/// in [0, 2π). Points on the same ray with the same radius are duplicates (the
/// first in input order survives); same ray with a different radius is a
/// star-shape violation. A center that is not strictly enclosed by the point set
/// is a geometry error.
OrderedContour order_by_angle(const Contour& contour, Point2 center);

/// Walks the contour in stored order and requires the polar angle about
/// `center` to advance monotonically through exactly one turn.
void require_star_shaped(const Contour& contour, Point2 center);

/// Resamples to `n` points at angles 2πk/n about `center` by linear
/// interpolation of radius against angle.
Contour resample_uniform_angle(const Contour& contour, Point2 center, std::size_t n);

/// Point correspondence between two frames on a shared uniform angle grid about
/// the frame-0 inner centroid. Frame-1 points are first rotated
/// counter-clockwise by `rotation_deg`, cancelling a clockwise rotation of the
/// wall. U = X(t1) - X(0) at each grid angle.
BoundaryDisplacements boundary_displacements(const FrameContours& frame0,
                                             const FrameContours& frame1, std::size_t n,
                                             double rotation_deg);

/// Same as above with an explicit reference center.
BoundaryDisplacements boundary_displacements(const FrameContours& frame0,
                                             const FrameContours& frame1, std::size_t n,
                                             double rotation_deg, Point2 reference_center);

}  // namespace cardiofem
