#include "cardiofem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstddef>

#include "cardiofem/error.hpp"

namespace cardiofem {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid input";
    case ErrorKind::geometry: return "geometry error";
    case ErrorKind::star_shape: return "star-shape violation";
    case ErrorKind::degenerate: return "degenerate geometry";
    case ErrorKind::configuration: return "configuration error";
    case ErrorKind::constraint_conflict: return "constraint conflict";
    case ErrorKind::singular_system: return "singular system";
    case ErrorKind::incompressible: return "incompressibility singularity";
    case ErrorKind::io: return "i/o error";
    case ErrorKind::internal: return "internal error";
  }
  return "unknown error";
}

double wrap_angle(double radians) {
  double a = std::fmod(radians, two_pi);
  if (a < 0.0) a += two_pi;
  // fmod of a tiny negative value can round up to exactly 2π
  if (a >= two_pi) a = 0.0;
  return a;
}

double polar_angle(Point2 p, Point2 center) {
  return wrap_angle(std::atan2(p.y - center.y, p.x - center.x));
}

Point2 rotate_about(Point2 p, Point2 center, double radians) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  const Vec2 d = p - center;
  return {center.x + c * d.x - s * d.y, center.y + s * d.x + c * d.y};
}

double signed_area(std::span<const Point2> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = polygon[i];
    const Point2 b = polygon[(i + 1) % n];
    acc += a.x * b.y - b.x * a.y;
  }
  return 0.5 * acc;
}

namespace {

int orientation(Point2 a, Point2 b, Point2 c) {
  const double v = twice_signed_area(a, b, c);
  const double scale = std::max({std::abs(b.x - a.x), std::abs(b.y - a.y),
                                 std::abs(c.x - a.x), std::abs(c.y - a.y)});
  if (std::abs(v) <= 1e-14 * scale * scale) return 0;
  return v > 0.0 ? 1 : -1;
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * ab);
}

}  // namespace

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

bool is_simple_polygon(std::span<const Point2> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (polygon[i] == polygon[(i + 1) % n]) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = polygon[i];
    const Point2 b = polygon[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      const Point2 c = polygon[j];
      const Point2 d = polygon[(j + 1) % n];
      if (adjacent) {
        // Adjacent edges share one vertex; they must not fold back on each other.
        const Point2 shared = (j == i + 1) ? b : a;
        const Point2 other_a = (j == i + 1) ? a : b;
        const Point2 other_c = (j == i + 1) ? d : c;
        if (orientation(other_a, shared, other_c) == 0 &&
            dot(other_a - shared, other_c - shared) > 0.0) {
          return false;
        }
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

bool strictly_inside(std::span<const Point2> polygon, Point2 p) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = polygon[i];
    const Point2 b = polygon[j];
    if (point_segment_distance(p, a, b) == 0.0) return false;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

double distance_to_boundary(std::span<const Point2> polygon, Point2 p) {
  const std::size_t n = polygon.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(p, polygon[i], polygon[(i + 1) % n]));
  }
  return best;
}

}  // namespace cardiofem
