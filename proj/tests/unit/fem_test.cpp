#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "cardiofem/fem.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"

using namespace cardiofem;

namespace {

Mesh annulus(std::size_t na, std::size_t nr, double a = 1.0, double b = 2.0) {
  return triangulate_annulus(Contour(oracle::circle({0, 0}, a, na), BoundaryLabel::inner),
                             Contour(oracle::circle({0, 0}, b, na), BoundaryLabel::outer), na, nr);
}

TriangleCoords random_triangle(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  while (true) {
    TriangleCoords t{Point2{u(rng), u(rng)}, Point2{u(rng), u(rng)}, Point2{u(rng), u(rng)}};
    const double a = twice_signed_area(t[0], t[1], t[2]);
    if (std::abs(a) < 0.5) continue;
    if (a < 0) std::swap(t[1], t[2]);
    return t;
  }
}

Mesh single_triangle(Point2 a, Point2 b, Point2 c) {
  Mesh m;
  m.nodes = {a, b, c};
  m.triangles = {{0, 1, 2}};
  m.boundary_edges = {{{0, 1}, BoundaryLabel::outer},
                      {{1, 2}, BoundaryLabel::outer},
                      {{2, 0}, BoundaryLabel::outer}};
  return m;
}

BoundaryConditionSet boundary_from(const Mesh& m, auto field) {
  BoundaryConditionSet bcs;
  std::set<std::size_t> seen;
  for (const BoundaryEdge& e : m.boundary_edges) {
    for (std::size_t n : e.nodes) {
      if (seen.insert(n).second) bcs.dirichlet.push_back({n, field(m.nodes[n])});
    }
  }
  return bcs;
}

Eigen::MatrixXd dense(const Eigen::SparseMatrix<double>& k) { return Eigen::MatrixXd(k); }

const ConstitutiveMatrix kPlaneStrain = constitutive_matrix({1e4, 0.3}, ConstitutiveMode::plane_strain);

}  // namespace

TEST(StrainDisplacement, MatchesTextbookFormula) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const TriangleCoords t = random_triangle(rng);
    EXPECT_LT((strain_displacement_matrix(t) - oracle::b_matrix(t)).norm(), 1e-12);
  }
}

TEST(StrainDisplacement, DegenerateOrClockwiseRejected) {
  EXPECT_ERROR_KIND(strain_displacement_matrix({Point2{0, 0}, Point2{1, 1}, Point2{2, 2}}),
                    ErrorKind::degenerate);
  EXPECT_ERROR_KIND(strain_displacement_matrix({Point2{0, 0}, Point2{0, 1}, Point2{1, 0}}),
                    ErrorKind::degenerate);
}

TEST(ElementStiffness, SymmetricWithRigidNullspace) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    const TriangleCoords t = random_triangle(rng);
    const ElementMatrix k = element_stiffness(t, kPlaneStrain);
    EXPECT_LT((k - k.transpose()).norm(), 1e-12 * k.norm());
    Eigen::Matrix<double, 6, 1> tx, ty, rot;
    for (int n = 0; n < 3; ++n) {
      tx.segment<2>(2 * n) << 1, 0;
      ty.segment<2>(2 * n) << 0, 1;
      rot.segment<2>(2 * n) << -t[n].y, t[n].x;
    }
    EXPECT_LT((k * tx).norm(), 1e-10 * k.norm());
    EXPECT_LT((k * ty).norm(), 1e-10 * k.norm());
    EXPECT_LT((k * rot).norm(), 1e-10 * k.norm());
    EXPECT_EQ(oracle::nullspace_dimension(k, 1e-10), 3u);
  }
}

TEST(ElementStiffness, UnitRightTriangleIdentityD) {
  const TriangleCoords t{Point2{0, 0}, Point2{1, 0}, Point2{0, 1}};
  const ConstitutiveMatrix id{Eigen::Matrix3d::Identity(), ConstitutiveMode::as_printed};
  // Unit gradients: grad N1 = (-1,-1), grad N2 = (1,0), grad N3 = (0,1).
  Eigen::Matrix<double, 3, 6> b;
  b << -1, 0, 1, 0, 0, 0,
        0, -1, 0, 0, 0, 1,
       -1, -1, 0, 1, 1, 0;
  const Eigen::Matrix<double, 6, 6> expected = 0.5 * b.transpose() * b;
  EXPECT_LT((element_stiffness(t, id) - expected).norm(), 1e-14);
}

TEST(ElementStiffness, ScaleInvariant) {
  std::mt19937_64 rng(3);
  const TriangleCoords t = random_triangle(rng);
  TriangleCoords s = t;
  for (Point2& p : s) p = 2.0 * p;
  const ElementMatrix k1 = element_stiffness(t, kPlaneStrain);
  EXPECT_LT((element_stiffness(s, kPlaneStrain) - k1).norm(), 1e-10 * k1.norm());
}

TEST(Assemble, SingleElementEqualsElementStiffness) {
  const Mesh m = single_triangle({0, 0}, {2, 0.5}, {0.3, 1.7});
  const LinearSystem s = assemble(m, uniform_material_field(m, {1e4, 0.3}), ConstitutiveMode::plane_strain);
  const ElementMatrix k = element_stiffness(m.corners(0), kPlaneStrain);
  EXPECT_LT((dense(s.stiffness) - Eigen::MatrixXd(k)).norm(), 1e-9);
  EXPECT_EQ(s.load.norm(), 0.0);
}

TEST(Assemble, TwoElementsScatterAdd) {
  Mesh m;
  m.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  const LinearSystem s = assemble(m, uniform_material_field(m, {1e4, 0.3}), ConstitutiveMode::plane_strain);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(8, 8);
  for (std::size_t t = 0; t < 2; ++t) {
    const ElementMatrix k = element_stiffness(m.corners(t), kPlaneStrain);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        expected.block<2, 2>(2 * m.triangles[t][a], 2 * m.triangles[t][b]) += k.block<2, 2>(2 * a, 2 * b);
      }
    }
  }
  EXPECT_LT((dense(s.stiffness) - expected).norm(), 1e-9);
}

TEST(Assemble, AnnulusSymmetricWithThreeRigidModes) {
  for (auto [na, nr] : {std::pair{4, 1}, std::pair{16, 2}}) {
    const Mesh m = annulus(na, nr);
    const Eigen::MatrixXd k = dense(
        assemble(m, uniform_material_field(m, {1e4, 0.3}), ConstitutiveMode::plane_strain).stiffness);
    EXPECT_LE((k - k.transpose()).cwiseAbs().maxCoeff(), 1e-12 * k.cwiseAbs().maxCoeff());
    double gap = 0.0;
    EXPECT_EQ(oracle::nullspace_dimension(k, 1e-10, &gap), 3u);
    EXPECT_GT(gap, 1e6);
    Eigen::VectorXd tx(k.rows()), ty(k.rows()), rot(k.rows());
    for (std::size_t n = 0; n < m.node_count(); ++n) {
      tx.segment<2>(2 * n) << 1, 0;
      ty.segment<2>(2 * n) << 0, 1;
      rot.segment<2>(2 * n) << -m.nodes[n].y, m.nodes[n].x;
    }
    for (const Eigen::VectorXd* r : {&tx, &ty, &rot}) EXPECT_LT((k * *r).norm(), 1e-8 * k.norm());
  }
}

TEST(Assemble, MaterialFieldSizeMismatchIsConfigurationError) {
  const Mesh m = annulus(8, 1);
  MaterialField f = uniform_material_field(m, {});
  f.per_element.pop_back();
  EXPECT_ERROR_KIND(assemble(m, f, ConstitutiveMode::plane_strain), ErrorKind::configuration);
}

TEST(Dirichlet, ZeroBoundaryGivesZeroSolution) {
  const Mesh m = annulus(16, 3);
  const auto u = solve_problem(m, uniform_material_field(m, {}), ConstitutiveMode::as_printed,
                               boundary_from(m, [](Point2) { return Vec2{0, 0}; }));
  for (const Vec2& v : u.values) EXPECT_EQ(norm(v), 0.0);
}

TEST(Dirichlet, PatchTestReproducesAffineField) {
  const Mesh m = annulus(32, 6);
  auto field = [](Point2 p) { return Vec2{2 * p.x + p.y, p.x - 3 * p.y}; };
  for (ConstitutiveMode mode : {ConstitutiveMode::as_printed, ConstitutiveMode::plane_strain}) {
    const auto u = solve_problem(m, uniform_material_field(m, {}), mode, boundary_from(m, field));
    for (std::size_t n = 0; n < m.node_count(); ++n) {
      const Vec2 exact = field(m.nodes[n]);
      EXPECT_LE(norm(u[n] - exact), 1e-9 * norm(exact)) << "node " << n;
    }
  }
}

TEST(Dirichlet, RigidTranslationReproduced) {
  const Mesh m = annulus(24, 4);
  const auto u = solve_problem(m, uniform_material_field(m, {}), ConstitutiveMode::as_printed,
                               boundary_from(m, [](Point2) { return Vec2{0.3, -1.2}; }));
  for (const Vec2& v : u.values) {
    EXPECT_NEAR(v.x, 0.3, 1e-10);
    EXPECT_NEAR(v.y, -1.2, 1e-10);
  }
}

TEST(Dirichlet, ConstrainedValuesAreExact) {
  const Mesh m = annulus(16, 2);
  auto field = [](Point2 p) { return Vec2{std::sin(p.x), p.y * p.y * 0.1}; };
  const BoundaryConditionSet bcs = boundary_from(m, field);
  const auto u = solve_problem(m, uniform_material_field(m, {}), ConstitutiveMode::as_printed, bcs);
  for (const NodalDisplacement& nd : bcs.dirichlet) EXPECT_EQ(u[nd.node], nd.value);
}

TEST(Dirichlet, EliminationKeepsSymmetry) {
  const Mesh m = annulus(16, 2);
  LinearSystem s = assemble(m, uniform_material_field(m, {}), ConstitutiveMode::plane_strain);
  s = apply_dirichlet(std::move(s), boundary_from(m, [](Point2 p) { return Vec2{p.y, p.x}; }));
  const Eigen::MatrixXd k = dense(s.stiffness);
  EXPECT_LE((k - k.transpose()).cwiseAbs().maxCoeff(), 1e-12 * k.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(Dirichlet, EdgeAverageEqualsNodalForConstantData) {
  const Mesh m = annulus(16, 2);
  BoundaryConditionSet nodal = boundary_from(m, [](Point2) { return Vec2{0.5, 0.25}; });
  BoundaryConditionSet avg = nodal;
  avg.mode = DirichletMode::edge_average;
  const auto mats = uniform_material_field(m, {});
  const auto a = solve_problem(m, mats, ConstitutiveMode::as_printed, nodal);
  const auto b = solve_problem(m, mats, ConstitutiveMode::as_printed, avg);
  for (std::size_t n = 0; n < m.node_count(); ++n) EXPECT_LT(norm(a[n] - b[n]), 1e-12);
}

TEST(Dirichlet, EdgeAverageUsesIncidentEdgeMeans) {
  const Mesh m = annulus(8, 1);
  BoundaryConditionSet bcs;
  for (std::size_t n = 0; n < m.node_count(); ++n) bcs.dirichlet.push_back({n, {double(n * n), 0.0}});
  bcs.mode = DirichletMode::edge_average;
  LinearSystem s = apply_dirichlet(assemble(m, uniform_material_field(m, {}), ConstitutiveMode::as_printed), bcs);
  std::map<std::size_t, std::vector<double>> edge_values;
  for (const BoundaryEdge& e : m.boundary_edges) {
    const double v = 0.5 * (double(e.nodes[0] * e.nodes[0]) + double(e.nodes[1] * e.nodes[1]));
    edge_values[e.nodes[0]].push_back(v);
    edge_values[e.nodes[1]].push_back(v);
  }
  for (const auto& [node, vals] : edge_values) {
    ASSERT_EQ(vals.size(), 2u);
    ASSERT_TRUE(s.constrained[2 * node].has_value());
    EXPECT_NEAR(*s.constrained[2 * node], 0.5 * (vals[0] + vals[1]), 1e-12);
  }
}

TEST(Dirichlet, ConflictingConstraintsRejected) {
  const Mesh m = annulus(8, 1);
  BoundaryConditionSet bcs;
  bcs.dirichlet = {{0, {1.0, 0.0}}, {0, {1.0 + 1e-6, 0.0}}};
  EXPECT_ERROR_KIND(apply_dirichlet(assemble(m, uniform_material_field(m, {}), ConstitutiveMode::as_printed), bcs),
                    ErrorKind::constraint_conflict);
  bcs.dirichlet = {{0, {1.0, 0.0}}, {0, {1.0 + 1e-12, 0.0}}};
  EXPECT_NO_THROW(apply_dirichlet(assemble(m, uniform_material_field(m, {}), ConstitutiveMode::as_printed), bcs));
}

TEST(Dirichlet, SolutionLinearInBoundaryData) {
  const Mesh m = annulus(20, 3);
  const auto mats = uniform_material_field(m, {});
  auto g1 = [](Point2 p) { return Vec2{std::cos(p.x), p.y * 0.2}; };
  auto g2 = [](Point2 p) { return Vec2{p.x * p.y, -std::sin(p.y)}; };
  const double alpha = 1.7, beta = -0.6;
  const auto u1 = solve_problem(m, mats, ConstitutiveMode::as_printed, boundary_from(m, g1));
  const auto u2 = solve_problem(m, mats, ConstitutiveMode::as_printed, boundary_from(m, g2));
  const auto u12 = solve_problem(m, mats, ConstitutiveMode::as_printed,
                                 boundary_from(m, [&](Point2 p) { return alpha * g1(p) + beta * g2(p); }));
  for (std::size_t n = 0; n < m.node_count(); ++n) {
    const Vec2 combo = alpha * u1[n] + beta * u2[n];
    EXPECT_LE(norm(u12[n] - combo), 1e-9 * std::max(1.0, norm(combo)));
  }
}

TEST(Traction, ZeroTractionLeavesLoadUnchanged) {
  const Mesh m = annulus(8, 1);
  const LinearSystem s = assemble(m, uniform_material_field(m, {}), ConstitutiveMode::as_printed);
  BoundaryConditionSet bcs;
  for (const BoundaryEdge& e : m.boundary_edges) bcs.tractions.push_back({e.nodes, {0, 0}});
  EXPECT_EQ(apply_traction(s, bcs).load, s.load);
}

TEST(Traction, SingleEdgeLumping) {
  const Mesh m = single_triangle({0, 0}, {2, 0}, {0, 2});
  BoundaryConditionSet bcs;
  bcs.tractions.push_back({{0, 1}, {1, 0}});
  const LinearSystem s = apply_traction(assemble(m, uniform_material_field(m, {}), ConstitutiveMode::as_printed), bcs);
  EXPECT_DOUBLE_EQ(s.load[0], 1.0);
  EXPECT_DOUBLE_EQ(s.load[1], 0.0);
  EXPECT_DOUBLE_EQ(s.load[2], 1.0);
  EXPECT_DOUBLE_EQ(s.load[3], 0.0);
  EXPECT_DOUBLE_EQ(s.load[4], 0.0);
}

TEST(Traction, InteriorEdgeRejected) {
  const Mesh m = annulus(8, 2);
  BoundaryConditionSet bcs;
  const StructuredLayout& g = *m.layout;
  bcs.tractions.push_back({{g.node(0, 1), g.node(1, 1)}, {1, 0}});
  EXPECT_ERROR_KIND(apply_traction(assemble(m, uniform_material_field(m, {}), ConstitutiveMode::as_printed), bcs),
                    ErrorKind::invalid_input);
}

TEST(Traction, RadialPressureNetForceVanishes) {
  const Mesh m = annulus(64, 2);
  BoundaryConditionSet bcs;
  double circumference = 0.0;
  for (const BoundaryEdge& e : m.boundary_edges) {
    if (e.label != BoundaryLabel::inner) continue;
    const Vec2 d = m.nodes[e.nodes[1]] - m.nodes[e.nodes[0]];
    circumference += norm(d);
    bcs.tractions.push_back({e.nodes, (-2.5 / norm(d)) * Vec2{d.y, -d.x}});
  }
  const LinearSystem s = apply_traction(assemble(m, uniform_material_field(m, {}), ConstitutiveMode::as_printed), bcs);
  double fx = 0, fy = 0;
  for (std::size_t n = 0; n < m.node_count(); ++n) {
    fx += s.load[2 * n];
    fy += s.load[2 * n + 1];
  }
  EXPECT_LT(std::hypot(fx, fy), 1e-9 * 2.5 * circumference);
}

TEST(Solve, UnconstrainedSystemIsSingular) {
  const Mesh m = annulus(8, 1);
  const LinearSystem s = assemble(m, uniform_material_field(m, {}), ConstitutiveMode::as_printed);
  EXPECT_ERROR_KIND(solve(s), ErrorKind::singular_system);
  BoundaryConditionSet two_pins;
  two_pins.pinned = {{0, 0, 0.0}, {0, 1, 0.0}};
  EXPECT_ERROR_KIND(solve(apply_dirichlet(s, two_pins)), ErrorKind::singular_system);
}

TEST(Solve, ResidualContractAndSolverAgreement) {
  const Mesh m = annulus(32, 4);
  LinearSystem s = assemble(m, uniform_material_field(m, {}), ConstitutiveMode::plane_strain);
  s = apply_dirichlet(std::move(s), boundary_from(m, [](Point2 p) { return Vec2{0.01 * p.x * p.y, 0.02 * p.x}; }));
  const SolveResult direct = solve_with_stats(s);
  EXPECT_LE(direct.residual, 1e-10);
  SolverOptions cg;
  cg.kind = SolverKind::conjugate_gradient;
  const SolveResult iter = solve_with_stats(s, cg);
  EXPECT_LE(iter.residual, 1e-10);
  for (std::size_t n = 0; n < m.node_count(); ++n) {
    EXPECT_LT(norm(direct.field[n] - iter.field[n]), 1e-9);
  }
}

TEST(RemoveRigidMotion, PureRigidFieldVanishes) {
  const Mesh m = annulus(16, 2);
  DisplacementField f;
  for (const Point2& p : m.nodes) f.values.push_back(Vec2{0.2, -0.1} + 1e-3 * Vec2{-p.y, p.x});
  for (const Vec2& v : remove_rigid_motion(m, f).values) EXPECT_LT(norm(v), 1e-15);
}

TEST(RemoveRigidMotion, IgnoresAddedRigidMotion) {
  const Mesh m = annulus(16, 2);
  DisplacementField f, g;
  for (const Point2& p : m.nodes) {
    f.values.push_back({0.1 * p.x * p.x, 0.05 * p.y});
    g.values.push_back(f.values.back() + Vec2{3, 4} + 0.01 * Vec2{-p.y, p.x});
  }
  const auto rf = remove_rigid_motion(m, f), rg = remove_rigid_motion(m, g);
  for (std::size_t n = 0; n < m.node_count(); ++n) EXPECT_LT(norm(rf[n] - rg[n]), 1e-12);
}

TEST(Interpolate, ExactForLinearField) {
  const Mesh m = annulus(12, 2);
  DisplacementField f;
  for (const Point2& p : m.nodes) f.values.push_back({1 + 2 * p.x - p.y, 3 * p.y});
  for (std::size_t t = 0; t < m.triangle_count(); ++t) {
    const Point2 g = triangle_centroid(m, t);
    const Vec2 v = interpolate(m, f, t, g);
    EXPECT_NEAR(v.x, 1 + 2 * g.x - g.y, 1e-12);
    EXPECT_NEAR(v.y, 3 * g.y, 1e-12);
  }
}

TEST(MatrixMarket, HeaderAndEntryCount) {
  const Mesh m = single_triangle({0, 0}, {1, 0}, {0, 1});
  const LinearSystem s = assemble(m, uniform_material_field(m, {}), ConstitutiveMode::as_printed);
  std::ostringstream out;
  write_matrix_market(out, s.stiffness);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("%%MatrixMarket matrix coordinate real", 0), 0u);
  std::string line;
  while (std::getline(in, line) && line[0] == '%') {}
  std::istringstream dims(line);
  long rows, cols, nnz;
  dims >> rows >> cols >> nnz;
  EXPECT_EQ(rows, 6);
  EXPECT_EQ(cols, 6);
  EXPECT_EQ(nnz, s.stiffness.nonZeros());
}
