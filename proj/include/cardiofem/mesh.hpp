#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cardiofem/contour.hpp"
#include "cardiofem/geometry.hpp"

namespace cardiofem {

using Triangle = std::array<std::size_t, 3>;

/// Boundary edge oriented with the domain on its left, so the outward normal
/// is the right-hand normal of (nodes[0] -> nodes[1]).
struct BoundaryEdge {
  std::array<std::size_t, 2> nodes;
  BoundaryLabel label;
};

/// Shape of a mesh produced by triangulate_annulus: node (k, j) with angle
/// index k and layer j has index j * n_angular + k.
struct StructuredLayout {
  std::size_t n_angular;
  std::size_t n_radial;

  std::size_t node(std::size_t angle_index, std::size_t layer) const {
    return layer * n_angular + angle_index % n_angular;
  }
};

struct Mesh {
  std::vector<Point2> nodes;
  std::vector<Triangle> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  std::optional<StructuredLayout> layout;

  std::size_t node_count() const noexcept { return nodes.size(); }
  std::size_t triangle_count() const noexcept { return triangles.size(); }
  std::array<Point2, 3> corners(std::size_t t) const {
    const Triangle& tri = triangles[t];
    return {nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]};
  }
};

inline constexpr double default_min_angle_deg = 15.0;

double triangle_area(const Mesh& mesh, std::size_t t);
Point2 triangle_centroid(const Mesh& mesh, std::size_t t);
double total_area(const Mesh& mesh);

/// Structured mesh of the region between two contours sampled on the same
/// n_angular-point angle grid. Layer j (0..n_radial) interpolates the matched
/// inner/outer points at fraction j / n_radial. Each quad (k, j) is split along
/// the diagonal from node (k, j) to node (k+1, j+1); the angle index is taken
/// unwrapped so every column uses the same diagonal.
Mesh triangulate_annulus(const Contour& inner, const Contour& outer, std::size_t n_angular,
                         std::size_t n_radial);

struct MeshCheck {
  std::string name;
  bool passed;
  std::string detail;
  bool warning_only = false;
};

struct ValidationReport {
  std::vector<MeshCheck> checks;
  double min_angle_deg = 0.0;

  /// True when every non-warning check passed.
  bool ok() const;
  bool quality_warning() const;
  const MeshCheck* find(const std::string& name) const;
};

/// Checks: "indices", "duplicate_nodes", "area_positive", "euler",
/// "boundary_loops", "boundary_labels" and the warning-only "min_angle".
ValidationReport validate(const Mesh& mesh, double min_angle_deg = default_min_angle_deg);

/// Bucket grid over triangle bounding boxes. Among the triangles whose closed
/// barycentric region contains the query point, the lowest index is returned.
class PointLocator {
 public:
  explicit PointLocator(const Mesh& mesh);

  std::optional<std::size_t> locate(Point2 p) const;

 private:
  const Mesh* mesh_;
  Point2 lo_;
  double cell_w_ = 1.0;
  double cell_h_ = 1.0;
  std::size_t nx_ = 1;
  std::size_t ny_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

/// Barycentric containment with a small relative tolerance for edges.
bool triangle_contains(const std::array<Point2, 3>& tri, Point2 p);

std::optional<std::size_t> locate_element(const Mesh& mesh, Point2 p);

}  // namespace cardiofem
