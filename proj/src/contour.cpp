#include "cardiofem/contour.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>

#include "cardiofem/error.hpp"

namespace cardiofem {

std::string_view to_string(BoundaryLabel label) noexcept {
  return label == BoundaryLabel::inner ? "inner" : "outer";
}

BoundaryLabel parse_boundary_label(std::string_view text) {
  if (text == "inner") return BoundaryLabel::inner;
  if (text == "outer") return BoundaryLabel::outer;
  throw Error(ErrorKind::invalid_input,
              "boundary label must be 'inner' or 'outer', got '" + std::string(text) + "'");
}

Contour::Contour(std::vector<Point2> points, BoundaryLabel label)
    : points_(std::move(points)), label_(label) {
  if (points_.size() < 3) {
    throw Error(ErrorKind::invalid_input, std::string(to_string(label_)) +
                                              " contour needs at least 3 points, got " +
                                              std::to_string(points_.size()));
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!is_finite(points_[i])) {
      throw Error(ErrorKind::invalid_input, std::string(to_string(label_)) +
                                                " contour point " + std::to_string(i) +
                                                " is not finite");
    }
  }
}

void validate_simple(const Contour& contour) {
  if (!is_simple_polygon(contour.points())) {
    throw Error(ErrorKind::geometry,
                std::string(to_string(contour.label())) + " contour self-intersects");
  }
}

FrameContours::FrameContours(std::size_t frame_index, Contour inner, Contour outer)
    : frame_index_(frame_index), inner_(std::move(inner)), outer_(std::move(outer)) {
  const std::string where = "frame " + std::to_string(frame_index_);
  if (inner_.label() != BoundaryLabel::inner || outer_.label() != BoundaryLabel::outer) {
    throw Error(ErrorKind::invalid_input, where + ": inner/outer label mismatch");
  }
  try {
    validate_simple(inner_);
    validate_simple(outer_);
  } catch (const Error& e) {
    throw e.with_context(where);
  }
  for (const Point2& p : inner_.points()) {
    if (!strictly_inside(outer_.points(), p)) {
      throw Error(ErrorKind::geometry,
                  where + ": inner contour is not strictly inside the outer contour");
    }
  }
  const auto& in = inner_.points();
  const auto& out = outer_.points();
  for (std::size_t i = 0; i < in.size(); ++i) {
    for (std::size_t j = 0; j < out.size(); ++j) {
      if (segments_intersect(in[i], in[(i + 1) % in.size()], out[j],
                             out[(j + 1) % out.size()])) {
        throw Error(ErrorKind::geometry, where + ": inner and outer contours cross");
      }
    }
  }
}

Point2 centroid(std::span<const Point2> points) {
  if (points.empty()) {
    throw Error(ErrorKind::invalid_input, "centroid of an empty point set");
  }
  double sx = 0.0;
  double sy = 0.0;
  for (const Point2& p : points) {
    sx += p.x;
    sy += p.y;
  }
  const auto n = static_cast<double>(points.size());
  return {sx / n, sy / n};
}

Point2 centroid(const Contour& contour) { return centroid(contour.points()); }

namespace {

struct Polar {
  double angle;
  double radius;
  std::size_t index;
};

std::vector<Polar> to_polar(const Contour& contour, Point2 center) {
  std::vector<Polar> polar;
  polar.reserve(contour.size());
  double scale = 0.0;
  for (const Point2& p : contour.points()) scale = std::max(scale, distance(p, center));
  for (std::size_t i = 0; i < contour.size(); ++i) {
    const double r = distance(contour[i], center);
    if (r <= 1e-12 * std::max(scale, 1.0)) {
      throw Error(ErrorKind::geometry, std::string(to_string(contour.label())) +
                                           " contour point " + std::to_string(i) +
                                           " coincides with the center");
    }
    polar.push_back({polar_angle(contour[i], center), r, i});
  }
  return polar;
}

bool same_radius(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max(a, b);
}

}  // namespace

OrderedContour order_by_angle(const Contour& contour, Point2 center) {
  std::vector<Polar> polar = to_polar(contour, center);
  std::stable_sort(polar.begin(), polar.end(),
                   [](const Polar& a, const Polar& b) { return a.angle < b.angle; });

  const std::string label(to_string(contour.label()));
  auto tie_error = [&](const Polar& a, const Polar& b) {
    std::ostringstream msg;
    msg << label << " contour is not star-shaped about (" << center.x << ", " << center.y
        << "): points " << a.index << " and " << b.index << " lie on one ray at radii "
        << a.radius << " and " << b.radius;
    return Error(ErrorKind::star_shape, msg.str());
  };

  // Collapse runs of tied angles; the first point in input order survives.
  std::vector<Polar> kept;
  kept.reserve(polar.size());
  for (const Polar& p : polar) {
    if (!kept.empty() && p.angle - kept.back().angle <= angle_tie_tolerance) {
      if (!same_radius(p.radius, kept.back().radius)) throw tie_error(kept.back(), p);
      if (p.index < kept.back().index) kept.back() = p;
      continue;
    }
    kept.push_back(p);
  }
  // The run can also wrap through angle 0.
  while (kept.size() > 1 &&
         kept.front().angle + two_pi - kept.back().angle <= angle_tie_tolerance) {
    if (!same_radius(kept.front().radius, kept.back().radius)) {
      throw tie_error(kept.back(), kept.front());
    }
    if (kept.back().index < kept.front().index) kept.front().index = kept.back().index;
    kept.pop_back();
  }
  if (kept.size() < 3) {
    throw Error(ErrorKind::geometry,
                label + " contour has fewer than 3 distinct directions about the center");
  }

  double max_gap = kept.front().angle + two_pi - kept.back().angle;
  for (std::size_t i = 1; i < kept.size(); ++i) {
    max_gap = std::max(max_gap, kept[i].angle - kept[i - 1].angle);
  }
  if (max_gap >= std::numbers::pi - 1e-12) {
    std::ostringstream msg;
    msg << "center (" << center.x << ", " << center.y << ") is not strictly inside the "
        << label << " contour";
    throw Error(ErrorKind::geometry, msg.str());
  }

  std::vector<Point2> points;
  std::vector<std::size_t> permutation;
  points.reserve(kept.size());
  permutation.reserve(kept.size());
  for (const Polar& p : kept) {
    points.push_back(contour[p.index]);
    permutation.push_back(p.index);
  }
  return {Contour(std::move(points), contour.label()), std::move(permutation)};
}

void require_star_shaped(const Contour& contour, Point2 center) {
  const std::vector<Polar> polar = to_polar(contour, center);
  const std::size_t n = polar.size();
  double total = 0.0;
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Polar& a = polar[i];
    const Polar& b = polar[(i + 1) % n];
    double step = b.angle - a.angle;
    if (step > std::numbers::pi) step -= two_pi;
    if (step <= -std::numbers::pi) step += two_pi;
    if (std::abs(step) <= angle_tie_tolerance) {
      if (!same_radius(a.radius, b.radius)) {
        throw Error(ErrorKind::star_shape, std::string(to_string(contour.label())) +
                                               " contour doubles back on a ray at point " +
                                               std::to_string(b.index));
      }
      continue;
    }
    const int s = step > 0.0 ? 1 : -1;
    if (sign != 0 && s != sign) {
      throw Error(ErrorKind::star_shape,
                  std::string(to_string(contour.label())) +
                      " contour is not star-shaped about its reference center (angle "
                      "reverses at point " +
                      std::to_string(b.index) + ")");
    }
    sign = s;
    total += step;
  }
  if (std::abs(std::abs(total) - two_pi) > 1e-6) {
    throw Error(ErrorKind::star_shape, std::string(to_string(contour.label())) +
                                           " contour does not wind once around its "
                                           "reference center");
  }
}

Contour resample_uniform_angle(const Contour& contour, Point2 center, std::size_t n) {
  if (n < 3) {
    throw Error(ErrorKind::invalid_input, "resampling needs n >= 3");
  }
  const OrderedContour ordered = order_by_angle(contour, center);
  const auto& pts = ordered.contour.points();
  const std::size_t m = pts.size();
  std::vector<double> angles(m);
  std::vector<double> radii(m);
  for (std::size_t i = 0; i < m; ++i) {
    angles[i] = polar_angle(pts[i], center);
    radii[i] = distance(pts[i], center);
  }

  std::vector<Point2> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = two_pi * static_cast<double>(k) / static_cast<double>(n);
    const auto upper = std::upper_bound(angles.begin(), angles.end(), theta);
    double a0, a1, r0, r1;
    if (upper == angles.begin() || upper == angles.end()) {
      // Interval wrapping through angle 0: last point to first point.
      a0 = angles[m - 1];
      r0 = radii[m - 1];
      a1 = angles[0] + two_pi;
      r1 = radii[0];
      if (upper == angles.begin()) {
        a0 -= two_pi;
        a1 -= two_pi;
      }
    } else {
      const auto i = static_cast<std::size_t>(upper - angles.begin());
      a0 = angles[i - 1];
      r0 = radii[i - 1];
      a1 = angles[i];
      r1 = radii[i];
    }
    const double t = (theta - a0) / (a1 - a0);
    const double r = r0 + t * (r1 - r0);
    out.push_back({center.x + r * std::cos(theta), center.y + r * std::sin(theta)});
  }
  return Contour(std::move(out), contour.label());
}

namespace {

std::vector<BoundaryVector> match(const Contour& c0, const Contour& c1, Point2 center,
                                  std::size_t n, double rotation_rad) {
  std::vector<Point2> derotated;
  derotated.reserve(c1.size());
  for (const Point2& p : c1.points()) derotated.push_back(rotate_about(p, center, rotation_rad));
  const Contour c1_compensated(std::move(derotated), c1.label());

  const Contour r0 = resample_uniform_angle(c0, center, n);
  const Contour r1 = resample_uniform_angle(c1_compensated, center, n);
  std::vector<BoundaryVector> vectors;
  vectors.reserve(n);
  for (std::size_t k = 0; k < n; ++k) vectors.push_back({r0[k], r1[k] - r0[k]});
  return vectors;
}

}  // namespace

BoundaryDisplacements boundary_displacements(const FrameContours& frame0,
                                             const FrameContours& frame1, std::size_t n,
                                             double rotation_deg) {
  return boundary_displacements(frame0, frame1, n, rotation_deg, centroid(frame0.inner()));
}

BoundaryDisplacements boundary_displacements(const FrameContours& frame0,
                                             const FrameContours& frame1, std::size_t n,
                                             double rotation_deg, Point2 reference_center) {
  if (!std::isfinite(rotation_deg)) {
    throw Error(ErrorKind::invalid_input, "rotation angle must be finite");
  }
  for (const FrameContours* f : {&frame0, &frame1}) {
    const std::string where = "frame " + std::to_string(f->frame_index());
    try {
      require_star_shaped(f->inner(), reference_center);
      require_star_shaped(f->outer(), reference_center);
    } catch (const Error& e) {
      throw e.with_context(where);
    }
  }
  const double rotation_rad = deg_to_rad(rotation_deg);
  BoundaryDisplacements result;
  result.reference_center = reference_center;
  result.inner_vectors = match(frame0.inner(), frame1.inner(), reference_center, n, rotation_rad);
  result.outer_vectors = match(frame0.outer(), frame1.outer(), reference_center, n, rotation_rad);
  return result;
}

}  // namespace cardiofem
