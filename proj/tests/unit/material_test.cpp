#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "cardiofem/material.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"

using namespace cardiofem;

TEST(ConstitutiveMatrix, ZeroPoissonCollapsesBothModes) {
  const Eigen::Matrix3d expected = Eigen::Vector3d(1, 1, 0.5).asDiagonal();
  for (ConstitutiveMode mode : {ConstitutiveMode::as_printed, ConstitutiveMode::plane_strain}) {
    const ConstitutiveMatrix d = constitutive_matrix({1.0, 0.0}, mode);
    EXPECT_TRUE(d.values.isApprox(expected, 1e-15)) << d.values;
    EXPECT_EQ(d.mode, mode);
  }
}

TEST(ConstitutiveMatrix, AsPrintedReferenceValues) {
  const ConstitutiveMatrix d = constitutive_matrix({1e4, 0.3}, ConstitutiveMode::as_printed);
  const double f = 10989.010989010989;
  Eigen::Matrix3d expected;
  expected << f, 0.3 * f, 0, 0.3 * f, f, 0, 0, 0, 0.35 * f;
  EXPECT_LT((d.values - expected).norm() / expected.norm(), 1e-6);
  EXPECT_NEAR(d.values(2, 2), 3846.1538461538457, 1e-9);
}

TEST(ConstitutiveMatrix, PlaneStrainReferenceValues) {
  const ConstitutiveMatrix d = constitutive_matrix({1e4, 0.3}, ConstitutiveMode::plane_strain);
  const double f = 1e4 / (1.3 * 0.4);
  EXPECT_NEAR(d.values(0, 0), 0.7 * f, 1e-9);
  EXPECT_NEAR(d.values(0, 1), 0.3 * f, 1e-9);
  EXPECT_NEAR(d.values(2, 2), 0.2 * f, 1e-9);
}

TEST(ConstitutiveMatrix, IncompressiblePlaneStrainRejected) {
  EXPECT_ERROR_KIND(constitutive_matrix({1.0, 0.5}, ConstitutiveMode::plane_strain),
                    ErrorKind::incompressible);
}

TEST(ConstitutiveMatrix, InvalidMaterialRejected) {
  EXPECT_ERROR_KIND(validate(Material{-1.0, 0.3}), ErrorKind::invalid_input);
  EXPECT_ERROR_KIND(validate(Material{1.0, -0.1}), ErrorKind::invalid_input);
  EXPECT_ERROR_KIND(validate(Material{1.0, 0.5}), ErrorKind::invalid_input);
}

TEST(ConstitutiveMatrix, SymmetricPositiveDefiniteOverSweep) {
  for (double e : {1e-3, 1.0, 7.5e3, 2e9}) {
    for (double nu : {0.0, 0.1, 0.25, 0.3, 0.45, 0.499}) {
      for (ConstitutiveMode mode : {ConstitutiveMode::as_printed, ConstitutiveMode::plane_strain}) {
        const Eigen::Matrix3d d = constitutive_matrix({e, nu}, mode).values;
        EXPECT_EQ((d - d.transpose()).norm(), 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(d);
        EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
      }
    }
  }
}

TEST(ConstitutiveMatrix, LinearInYoungsModulus) {
  for (ConstitutiveMode mode : {ConstitutiveMode::as_printed, ConstitutiveMode::plane_strain}) {
    const Eigen::Matrix3d d1 = constitutive_matrix({1.0, 0.3}, mode).values;
    const Eigen::Matrix3d d4 = constitutive_matrix({4.0, 0.3}, mode).values;
    EXPECT_TRUE(d4.isApprox(4.0 * d1, 1e-15));
  }
}

TEST(ConstitutiveMode, Parse) {
  EXPECT_EQ(parse_constitutive_mode("as-printed"), ConstitutiveMode::as_printed);
  EXPECT_EQ(parse_constitutive_mode("plane-strain"), ConstitutiveMode::plane_strain);
  EXPECT_ERROR_KIND(parse_constitutive_mode("plane-stress-ish"), ErrorKind::configuration);
}

namespace {

Mesh ring_mesh() {
  return triangulate_annulus(Contour(oracle::circle({0, 0}, 1, 64), BoundaryLabel::inner),
                             Contour(oracle::circle({0, 0}, 2, 64), BoundaryLabel::outer), 64, 8);
}

}  // namespace

TEST(RegionMaterialField, NoRegionsIsUniformBase) {
  const Mesh m = ring_mesh();
  const MaterialField f = region_material_field(m, {5.0, 0.2}, {}, {0, 0});
  EXPECT_TRUE(f.is_homogeneous());
  ASSERT_EQ(f.size(), m.triangle_count());
  for (const Material& mat : f.per_element) EXPECT_EQ(mat, (Material{5.0, 0.2}));
}

TEST(RegionMaterialField, FullCircleRegion) {
  const Mesh m = ring_mesh();
  const Material stiff{50.0, 0.3};
  const MaterialField f = region_material_field(m, {5.0, 0.2}, {{0.0, 360.0, stiff}}, {0, 0});
  for (const Material& mat : f.per_element) EXPECT_EQ(mat, stiff);
}

TEST(RegionMaterialField, QuarterRegionMatchesBruteForceAngles) {
  const Mesh m = ring_mesh();
  const Material base{1.0, 0.3}, stiff{10.0, 0.3};
  const MaterialField f = region_material_field(m, base, {{0.0, 90.0, stiff}}, {0, 0});
  std::size_t in_region = 0;
  for (std::size_t t = 0; t < m.triangle_count(); ++t) {
    const Point2 g = triangle_centroid(m, t);
    double ang = std::atan2(g.y, g.x) * 180.0 / M_PI;
    if (ang < 0) ang += 360.0;
    const bool inside = ang >= 0.0 && ang < 90.0;
    in_region += inside;
    EXPECT_EQ(f[t], inside ? stiff : base) << "element " << t << " angle " << ang;
  }
  EXPECT_EQ(in_region, m.triangle_count() / 4);
}

TEST(RegionMaterialField, WrappingRegion) {
  const AngularRegion r{315.0, 45.0, {}};
  EXPECT_TRUE(r.contains(deg_to_rad(350.0)));
  EXPECT_TRUE(r.contains(deg_to_rad(10.0)));
  EXPECT_FALSE(r.contains(deg_to_rad(45.0)));
  EXPECT_FALSE(r.contains(deg_to_rad(180.0)));
  EXPECT_DOUBLE_EQ(r.span_deg(), 90.0);
}

TEST(RegionMaterialField, OverlapIsConfigurationError) {
  const Mesh m = ring_mesh();
  EXPECT_ERROR_KIND(region_material_field(m, {}, {{0.0, 100.0, {}}, {90.0, 180.0, {}}}, {0, 0}),
                    ErrorKind::configuration);
  EXPECT_ERROR_KIND(region_material_field(m, {}, {{300.0, 20.0, {}}, {10.0, 40.0, {}}}, {0, 0}),
                    ErrorKind::configuration);
  EXPECT_NO_THROW(region_material_field(m, {}, {{0.0, 90.0, {}}, {90.0, 180.0, {}}}, {0, 0}));
}
