#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "cardiofem/contour.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"

using namespace cardiofem;

namespace {

Contour ring(Point2 c, double r, std::size_t n, BoundaryLabel label = BoundaryLabel::inner,
             double phase = 0.0) {
  return Contour(oracle::circle(c, r, n, phase), label);
}

FrameContours frame(std::size_t index, std::vector<Point2> inner, std::vector<Point2> outer) {
  return FrameContours(index, Contour(std::move(inner), BoundaryLabel::inner),
                       Contour(std::move(outer), BoundaryLabel::outer));
}

std::vector<Point2> transform(const std::vector<Point2>& pts, Point2 center, double scale,
                              double rot_rad) {
  std::vector<Point2> out;
  for (const Point2& p : pts) {
    const Point2 q = rotate_about(p, center, rot_rad);
    out.push_back(center + scale * (q - center));
  }
  return out;
}

}  // namespace

TEST(Contour, RejectsTooFewOrNonFinitePoints) {
  EXPECT_ERROR_KIND(Contour({{0, 0}, {1, 0}}, BoundaryLabel::inner), ErrorKind::invalid_input);
  EXPECT_ERROR_KIND(Contour({{0, 0}, {1, 0}, {NAN, 1}}, BoundaryLabel::inner),
                    ErrorKind::invalid_input);
}

TEST(Contour, SelfIntersectingPolygonIsGeometryError) {
  const Contour bowtie({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, BoundaryLabel::inner);
  EXPECT_ERROR_KIND(validate_simple(bowtie), ErrorKind::geometry);
}

TEST(Contour, FrameRequiresInnerStrictlyInsideOuter) {
  EXPECT_NO_THROW(frame(0, oracle::circle({0, 0}, 1, 16), oracle::circle({0, 0}, 2, 16)));
  EXPECT_ERROR_KIND(frame(0, oracle::circle({0, 0}, 2, 16), oracle::circle({0, 0}, 1, 16)),
                    ErrorKind::geometry);
  EXPECT_ERROR_KIND(frame(0, oracle::circle({1.5, 0}, 1, 16), oracle::circle({0, 0}, 2, 16)),
                    ErrorKind::geometry);
  EXPECT_ERROR_KIND(FrameContours(0, Contour(oracle::circle({0, 0}, 1, 8), BoundaryLabel::outer),
                                  Contour(oracle::circle({0, 0}, 2, 8), BoundaryLabel::outer)),
                    ErrorKind::invalid_input);
}

TEST(Centroid, UnitSquare) {
  const Point2 c = centroid(Contour({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, BoundaryLabel::inner));
  EXPECT_DOUBLE_EQ(c.x, 0.5);
  EXPECT_DOUBLE_EQ(c.y, 0.5);
}

TEST(Centroid, EmptyPointSetIsInvalidInput) {
  std::vector<Point2> none;
  EXPECT_ERROR_KIND(centroid(std::span<const Point2>(none)), ErrorKind::invalid_input);
}

TEST(Centroid, TranslationEquivariantAndPermutationInvariant) {
  std::vector<Point2> pts{{0.3, 1.1}, {2.0, -0.4}, {1.7, 2.9}, {-0.6, 0.8}, {0.9, -1.3}};
  const Point2 c = centroid(std::span<const Point2>(pts));
  std::vector<Point2> moved;
  for (const Point2& p : pts) moved.push_back(p + Point2{3.5, -2.25});
  const Point2 cm = centroid(std::span<const Point2>(moved));
  EXPECT_NEAR(cm.x, c.x + 3.5, 1e-12);
  EXPECT_NEAR(cm.y, c.y - 2.25, 1e-12);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(pts.begin(), pts.end(), rng);
    const Point2 cs = centroid(std::span<const Point2>(pts));
    EXPECT_NEAR(cs.x, c.x, 1e-12);
    EXPECT_NEAR(cs.y, c.y, 1e-12);
  }
}

TEST(Centroid, UniformCircleSamples) {
  const Point2 c = centroid(ring({3, 4}, 5, 32));
  EXPECT_NEAR(c.x, 3.0, 1e-12);
  EXPECT_NEAR(c.y, 4.0, 1e-12);
}

TEST(OrderByAngle, FourAxisPoints) {
  const Contour c({{0, 1}, {1, 0}, {-1, 0}, {0, -1}}, BoundaryLabel::inner);
  const OrderedContour o = order_by_angle(c, {0, 0});
  const std::vector<Point2> expected{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  ASSERT_EQ(o.contour.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(o.contour[i], expected[i]);
  }
  EXPECT_EQ(o.permutation, (std::vector<std::size_t>{1, 0, 2, 3}));
}

TEST(OrderByAngle, OrderedInputGivesIdentityPermutation) {
  const OrderedContour o = order_by_angle(ring({0, 0}, 2, 32), {0, 0});
  for (std::size_t i = 0; i < 32; ++i) EXPECT_EQ(o.permutation[i], i);
}

TEST(OrderByAngle, ShuffledInputGivesSameOutput) {
  const Contour base = ring({1, -2}, 3, 32, BoundaryLabel::inner, 0.1);
  const OrderedContour ref = order_by_angle(base, {1, -2});
  std::vector<Point2> pts = base.points();
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(pts.begin(), pts.end(), rng);
    const OrderedContour o = order_by_angle(Contour(pts, BoundaryLabel::inner), {1, -2});
    ASSERT_EQ(o.contour.size(), ref.contour.size());
    for (std::size_t i = 0; i < o.contour.size(); ++i) {
      EXPECT_EQ(o.contour[i], ref.contour[i]);
      EXPECT_EQ(pts[o.permutation[i]], o.contour[i]);
    }
  }
}

TEST(OrderByAngle, OutputIsPermutationOfInput) {
  std::vector<Point2> pts = oracle::circle({0, 0}, 1, 24);
  std::mt19937 rng(3);
  std::shuffle(pts.begin(), pts.end(), rng);
  const OrderedContour o = order_by_angle(Contour(pts, BoundaryLabel::outer), {0, 0});
  std::vector<std::size_t> perm = o.permutation;
  std::sort(perm.begin(), perm.end());
  for (std::size_t i = 0; i < perm.size(); ++i) EXPECT_EQ(perm[i], i);
}

TEST(OrderByAngle, AnglesStrictlyIncreasing) {
  const OrderedContour o = order_by_angle(ring({0, 0}, 1, 40, BoundaryLabel::inner, 0.37), {0, 0});
  for (std::size_t i = 1; i < o.contour.size(); ++i) {
    EXPECT_LT(polar_angle(o.contour[i - 1], {0, 0}), polar_angle(o.contour[i], {0, 0}));
  }
}

TEST(OrderByAngle, DuplicatePointKeepsFirst) {
  const Contour c({{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 0}}, BoundaryLabel::inner);
  const OrderedContour o = order_by_angle(c, {0, 0});
  EXPECT_EQ(o.contour.size(), 4u);
  EXPECT_EQ(o.permutation.front(), 0u);
}

TEST(OrderByAngle, SameRayDifferentRadiusIsStarShapeViolation) {
  const Contour c({{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {2, 0}}, BoundaryLabel::inner);
  EXPECT_ERROR_KIND(order_by_angle(c, {0, 0}), ErrorKind::star_shape);
}

TEST(OrderByAngle, CenterOutsideIsGeometryError) {
  EXPECT_ERROR_KIND(order_by_angle(ring({0, 0}, 1, 16), {5, 3}), ErrorKind::geometry);
}

TEST(RequireStarShaped, RejectsNonStarPolygon) {
  // A C-shaped polygon whose walk about the origin reverses direction.
  const Contour c({{2, -2}, {2, 2}, {-2, 2}, {-2, 1}, {1, 1}, {1, -1}, {-2, -1}, {-2, -2}},
                  BoundaryLabel::inner);
  EXPECT_ERROR_KIND(require_star_shaped(c, {1.5, 0}), ErrorKind::star_shape);
  EXPECT_NO_THROW(require_star_shaped(ring({0, 0}, 1, 12), {0, 0}));
}

TEST(Resample, CircleRadiiPreserved) {
  for (std::size_t n : {3u, 7u, 64u, 100u}) {
    const Contour r = resample_uniform_angle(ring({2, 1}, 4, 256), {2, 1}, n);
    ASSERT_EQ(r.size(), n);
    for (const Point2& p : r.points()) EXPECT_NEAR(distance(p, {2, 1}), 4.0, 1e-3);
  }
}

TEST(Resample, ExactlyOnUniformGrid) {
  const Contour r = resample_uniform_angle(ring({0, 0}, 2, 64, BoundaryLabel::inner, 0.05), {0, 0}, 32);
  for (std::size_t k = 0; k < 32; ++k) {
    const double expected = two_pi * static_cast<double>(k) / 32.0;
    EXPECT_NEAR(std::atan2(r[k].y, r[k].x) < 0 ? std::atan2(r[k].y, r[k].x) + two_pi
                                                : std::atan2(r[k].y, r[k].x),
                expected, 1e-12);
  }
}

TEST(Resample, CircleOnGridRadiusExact) {
  // Radius interpolation on a circle is exact, so the 1e-9 bound holds even
  // off the input grid.
  const Contour r = resample_uniform_angle(ring({0, 0}, 2.5, 17, BoundaryLabel::inner, 0.2), {0, 0}, 50);
  for (const Point2& p : r.points()) EXPECT_NEAR(norm(p), 2.5, 1e-9);
}

TEST(Resample, IdentityOnUniformGrid) {
  const Contour c = ring({1, 1}, 3, 24);
  const Contour r = resample_uniform_angle(c, {1, 1}, 24);
  for (std::size_t k = 0; k < 24; ++k) {
    EXPECT_NEAR(r[k].x, c[k].x, 1e-12);
    EXPECT_NEAR(r[k].y, c[k].y, 1e-12);
  }
}

TEST(Resample, EllipsePolarRadius) {
  std::vector<Point2> pts;
  for (std::size_t k = 0; k < 512; ++k) {
    const double t = two_pi * static_cast<double>(k) / 512.0;
    pts.push_back({2.0 * std::cos(t), std::sin(t)});
  }
  const Contour r = resample_uniform_angle(Contour(pts, BoundaryLabel::outer), {0, 0}, 64);
  for (std::size_t k = 0; k < 64; ++k) {
    const double th = two_pi * static_cast<double>(k) / 64.0;
    const double analytic =
        2.0 / std::sqrt(std::pow(std::sin(th) * 2.0, 2) + std::pow(std::cos(th), 2));
    EXPECT_NEAR(norm(r[k]), analytic, 1e-3);
  }
}

TEST(Resample, RejectsSmallN) {
  EXPECT_ERROR_KIND(resample_uniform_angle(ring({0, 0}, 1, 8), {0, 0}, 2), ErrorKind::invalid_input);
}

TEST(BoundaryDisplacements, IdenticalFramesGiveZero) {
  const FrameContours f = frame(0, oracle::circle({5, 5}, 2, 40), oracle::circle({5, 5}, 3, 40));
  const BoundaryDisplacements d = boundary_displacements(f, f, 64, 0.0);
  ASSERT_EQ(d.inner_vectors.size(), 64u);
  ASSERT_EQ(d.outer_vectors.size(), 64u);
  for (const auto* vs : {&d.inner_vectors, &d.outer_vectors}) {
    for (const BoundaryVector& v : *vs) EXPECT_EQ(norm(v.displacement), 0.0);
  }
}

TEST(BoundaryDisplacements, ReferenceCenterIsFrame0InnerCentroid) {
  std::vector<Point2> inner{{0, 0}, {2, 0}, {2, 1}, {0, 1}};
  const FrameContours f = frame(0, inner, oracle::circle({1, 0.5}, 4, 32));
  const BoundaryDisplacements d = boundary_displacements(f, f, 16, 0.0);
  EXPECT_NEAR(d.reference_center.x, 1.0, 1e-12);
  EXPECT_NEAR(d.reference_center.y, 0.5, 1e-12);
}

TEST(BoundaryDisplacements, UniformContraction) {
  const Point2 c{1, 2};
  const auto in0 = oracle::circle(c, 2, 48, 0.1);
  const auto out0 = oracle::circle(c, 3.5, 48, 0.1);
  const FrameContours f0 = frame(0, in0, out0);
  const FrameContours f1 = frame(1, transform(in0, c, 0.9, 0), transform(out0, c, 0.9, 0));
  const BoundaryDisplacements d = boundary_displacements(f0, f1, 64, 0.0);
  for (const auto* vs : {&d.inner_vectors, &d.outer_vectors}) {
    for (const BoundaryVector& v : *vs) {
      const Vec2 radial = v.position - c;
      EXPECT_NEAR(norm(v.displacement), 0.1 * norm(radial), 1e-9);
      EXPECT_LT(dot(v.displacement, radial), 0.0);
    }
  }
}

TEST(BoundaryDisplacements, ClockwiseRotationIsCompensated) {
  const Point2 c{0, 0};
  std::vector<Point2> in0, out0;
  for (std::size_t k = 0; k < 40; ++k) {
    const double t = two_pi * static_cast<double>(k) / 40.0;
    in0.push_back({(2.0 + 0.2 * std::cos(3 * t)) * std::cos(t), (2.0 + 0.2 * std::cos(3 * t)) * std::sin(t)});
    out0.push_back({(3.5 + 0.1 * std::sin(2 * t)) * std::cos(t), (3.5 + 0.1 * std::sin(2 * t)) * std::sin(t)});
  }
  const FrameContours f0 = frame(0, in0, out0);
  const Point2 ref = centroid(f0.inner());
  const double cw = -deg_to_rad(7.0);
  const FrameContours f1 = frame(1, transform(in0, ref, 1.0, cw), transform(out0, ref, 1.0, cw));
  const BoundaryDisplacements d = boundary_displacements(f0, f1, 64, 7.0);
  for (const auto* vs : {&d.inner_vectors, &d.outer_vectors}) {
    for (const BoundaryVector& v : *vs) EXPECT_LT(norm(v.displacement), 1e-9);
  }
}

TEST(BoundaryDisplacements, RotationParameterMatchesUnrotatedFrame) {
  const auto in0 = oracle::circle({0, 0}, 2, 36);
  const auto out0 = oracle::circle({0, 0}, 3, 36);
  std::vector<Point2> in1, out1;
  for (std::size_t k = 0; k < 36; ++k) {
    const double t = two_pi * static_cast<double>(k) / 36.0;
    const double ri = 1.8 + 0.1 * std::sin(2 * t);
    in1.push_back({ri * std::cos(t), ri * std::sin(t)});
    out1.push_back({2.9 * std::cos(t), 2.9 * std::sin(t)});
  }
  const FrameContours f0 = frame(0, in0, out0);
  const FrameContours f1 = frame(1, in1, out1);
  const Point2 ref = centroid(f0.inner());
  for (double deg : {3.0, 7.0, -12.5}) {
    const FrameContours f1r =
        frame(1, transform(in1, ref, 1.0, -deg_to_rad(deg)), transform(out1, ref, 1.0, -deg_to_rad(deg)));
    const BoundaryDisplacements a = boundary_displacements(f0, f1, 48, 0.0);
    const BoundaryDisplacements b = boundary_displacements(f0, f1r, 48, deg);
    for (std::size_t k = 0; k < 48; ++k) {
      EXPECT_NEAR(a.inner_vectors[k].displacement.x, b.inner_vectors[k].displacement.x, 1e-9);
      EXPECT_NEAR(a.inner_vectors[k].displacement.y, b.inner_vectors[k].displacement.y, 1e-9);
      EXPECT_NEAR(a.outer_vectors[k].displacement.x, b.outer_vectors[k].displacement.x, 1e-9);
      EXPECT_NEAR(a.outer_vectors[k].displacement.y, b.outer_vectors[k].displacement.y, 1e-9);
    }
  }
}

TEST(BoundaryDisplacements, PositionsLieOnFrame0Contours) {
  const FrameContours f0 = frame(0, oracle::circle({0, 0}, 2, 256), oracle::circle({0, 0}, 3, 256));
  const BoundaryDisplacements d = boundary_displacements(f0, f0, 32, 0.0);
  for (const BoundaryVector& v : d.inner_vectors) EXPECT_NEAR(norm(v.position), 2.0, 1e-3);
  for (const BoundaryVector& v : d.outer_vectors) EXPECT_NEAR(norm(v.position), 3.0, 1e-3);
}

TEST(BoundaryLabel, ParseRoundTrip) {
  EXPECT_EQ(parse_boundary_label("inner"), BoundaryLabel::inner);
  EXPECT_EQ(parse_boundary_label(to_string(BoundaryLabel::outer)), BoundaryLabel::outer);
  EXPECT_ERROR_KIND(parse_boundary_label("middle"), ErrorKind::invalid_input);
}
