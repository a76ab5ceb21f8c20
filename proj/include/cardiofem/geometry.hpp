#pragma once

#include <cmath>
#include <numbers>
#include <span>

namespace cardiofem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

/// Displacement vectors share the point representation.
using Vec2 = Point2;

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

constexpr double two_pi = 2.0 * std::numbers::pi;

/// atan2 mapped to [0, 2π).
double polar_angle(Point2 p, Point2 center);

/// Wraps any angle into [0, 2π).
double wrap_angle(double radians);

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Counter-clockwise rotation of `p` about `center` by `radians`.
Point2 rotate_about(Point2 p, Point2 center, double radians);

/// Twice the signed area of triangle (a, b, c); positive when counter-clockwise.
inline double twice_signed_area(Point2 a, Point2 b, Point2 c) {
  return cross(b - a, c - a);
}

/// Shoelace signed area of a closed polygon (last vertex joins the first).
double signed_area(std::span<const Point2> polygon);

/// True when no two non-adjacent edges intersect and no adjacent edges overlap.
bool is_simple_polygon(std::span<const Point2> polygon);

/// Even-odd rule; points on the boundary are reported as not strictly inside.
bool strictly_inside(std::span<const Point2> polygon, Point2 p);

/// Minimum distance from `p` to the polygon boundary.
double distance_to_boundary(std::span<const Point2> polygon, Point2 p);

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2);

}  // namespace cardiofem
