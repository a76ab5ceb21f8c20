#include "cardiofem/fem.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "cardiofem/error.hpp"

namespace cardiofem {

StrainDisplacementMatrix strain_displacement_matrix(const TriangleCoords& coords) {
  const auto& [p1, p2, p3] = coords;
  const double area2 = twice_signed_area(p1, p2, p3);
  if (!(area2 > 0.0)) {
    std::ostringstream msg;
    msg << "degenerate or clockwise triangle (twice signed area " << area2 << ")";
    throw Error(ErrorKind::degenerate, msg.str());
  }
  // Gradients of the barycentric basis functions.
  const double b1 = (p2.y - p3.y) / area2;
  const double b2 = (p3.y - p1.y) / area2;
  const double b3 = (p1.y - p2.y) / area2;
  const double c1 = (p3.x - p2.x) / area2;
  const double c2 = (p1.x - p3.x) / area2;
  const double c3 = (p2.x - p1.x) / area2;

  StrainDisplacementMatrix b;
  b << b1, 0.0, b2, 0.0, b3, 0.0,
       0.0, c1, 0.0, c2, 0.0, c3,
       c1, b1, c2, b2, c3, b3;
  return b;
}

ElementMatrix element_stiffness(const TriangleCoords& coords, const ConstitutiveMatrix& d) {
  const StrainDisplacementMatrix b = strain_displacement_matrix(coords);
  const double area = 0.5 * twice_signed_area(coords[0], coords[1], coords[2]);
  ElementMatrix k = area * (b.transpose() * d.values * b);
  // Enforce exact symmetry against rounding in the triple product.
  return 0.5 * (k + k.transpose());
}

std::size_t LinearSystem::constrained_count() const {
  return static_cast<std::size_t>(
      std::count_if(constrained.begin(), constrained.end(), [](const auto& c) { return c.has_value(); }));
}

LinearSystem assemble(const Mesh& mesh, const MaterialField& materials, ConstitutiveMode mode) {
  if (materials.size() != mesh.triangle_count()) {
    throw Error(ErrorKind::configuration, "material field covers " +
                                              std::to_string(materials.size()) +
                                              " elements but the mesh has " +
                                              std::to_string(mesh.triangle_count()));
  }
  const std::size_t n_dof = 2 * mesh.node_count();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(36 * mesh.triangle_count());
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    for (std::size_t v : tri) {
      if (v >= mesh.node_count()) {
        throw Error(ErrorKind::internal, "triangle " + std::to_string(t) +
                                             " references missing node " + std::to_string(v));
      }
    }
    ElementMatrix ke;
    try {
      ke = element_stiffness(mesh.corners(t), constitutive_matrix(materials[t], mode));
    } catch (const Error& e) {
      throw e.with_context("element " + std::to_string(t));
    }
    std::array<Eigen::Index, 6> dofs{};
    for (int a = 0; a < 3; ++a) {
      dofs[2 * a] = static_cast<Eigen::Index>(2 * tri[a]);
      dofs[2 * a + 1] = static_cast<Eigen::Index>(2 * tri[a] + 1);
    }
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) triplets.emplace_back(dofs[i], dofs[j], ke(i, j));
    }
  }

  LinearSystem system;
  system.stiffness.resize(static_cast<Eigen::Index>(n_dof), static_cast<Eigen::Index>(n_dof));
  system.stiffness.setFromTriplets(triplets.begin(), triplets.end());
  system.stiffness.makeCompressed();
  system.load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_dof));
  system.constrained.assign(n_dof, std::nullopt);
  system.nodes = mesh.nodes;
  system.boundary_edges = mesh.boundary_edges;
  return system;
}

namespace {

void require_node(const LinearSystem& system, std::size_t node, const char* what) {
  if (node >= system.nodes.size()) {
    throw Error(ErrorKind::invalid_input, std::string(what) + " references node " +
                                              std::to_string(node) + " outside the mesh");
  }
}

void add_constraint(std::map<std::size_t, double>& pending, std::size_t dof, double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::invalid_input,
                "non-finite prescribed displacement at node " + std::to_string(dof / 2));
  }
  const auto [it, inserted] = pending.emplace(dof, value);
  if (!inserted && std::abs(it->second - value) > 1e-9) {
    std::ostringstream msg;
    msg << "node " << dof / 2 << " component " << (dof % 2 == 0 ? 'u' : 'v')
        << " constrained to both " << it->second << " and " << value;
    throw Error(ErrorKind::constraint_conflict, msg.str());
  }
}

}  // namespace

LinearSystem apply_dirichlet(LinearSystem system, const BoundaryConditionSet& bcs) {
  std::map<std::size_t, Vec2> nodal;
  for (const NodalDisplacement& nd : bcs.dirichlet) {
    require_node(system, nd.node, "Dirichlet condition");
    const auto [it, inserted] = nodal.emplace(nd.node, nd.value);
    if (!inserted && norm(it->second - nd.value) > 1e-9) {
      throw Error(ErrorKind::constraint_conflict,
                  "node " + std::to_string(nd.node) + " has two different prescribed displacements");
    }
  }

  std::map<std::size_t, Vec2> imposed = nodal;
  if (bcs.mode == DirichletMode::edge_average) {
    std::map<std::size_t, std::pair<Vec2, int>> acc;
    for (const BoundaryEdge& e : system.boundary_edges) {
      const auto a = nodal.find(e.nodes[0]);
      const auto b = nodal.find(e.nodes[1]);
      if (a == nodal.end() || b == nodal.end()) continue;
      const Vec2 edge_value = 0.5 * (a->second + b->second);
      for (std::size_t n : e.nodes) {
        auto& [sum, count] = acc[n];
        sum = sum + edge_value;
        ++count;
      }
    }
    for (const auto& [node, sum_count] : acc) {
      imposed[node] = (1.0 / sum_count.second) * sum_count.first;
    }
  }

  std::map<std::size_t, double> pending;
  for (const auto& [node, value] : imposed) {
    add_constraint(pending, 2 * node, value.x);
    add_constraint(pending, 2 * node + 1, value.y);
  }
  for (const DofConstraint& pin : bcs.pinned) {
    require_node(system, pin.node, "pinned constraint");
    if (pin.component != 0 && pin.component != 1) {
      throw Error(ErrorKind::invalid_input, "pinned component must be 0 (u) or 1 (v)");
    }
    add_constraint(pending, 2 * pin.node + static_cast<std::size_t>(pin.component), pin.value);
  }
  for (const auto& [dof, value] : pending) {
    const auto& existing = system.constrained[dof];
    if (existing && std::abs(*existing - value) > 1e-9) {
      throw Error(ErrorKind::constraint_conflict,
                  "node " + std::to_string(dof / 2) + " was already constrained to a different value");
    }
  }

  const auto n = static_cast<Eigen::Index>(system.dof_count());
  Eigen::VectorXd lifted = Eigen::VectorXd::Zero(n);
  std::vector<bool> fresh(system.dof_count(), false);
  for (const auto& [dof, value] : pending) {
    if (system.constrained[dof]) continue;
    lifted[static_cast<Eigen::Index>(dof)] = value;
    fresh[dof] = true;
  }
  system.load -= system.stiffness * lifted;

  std::vector<double> diagonal(system.dof_count(), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (fresh[static_cast<std::size_t>(i)]) diagonal[static_cast<std::size_t>(i)] = system.stiffness.coeff(i, i);
  }
  system.stiffness.prune([&](Eigen::Index row, Eigen::Index col, double) {
    return row == col || (!fresh[static_cast<std::size_t>(row)] && !fresh[static_cast<std::size_t>(col)]);
  });
  for (const auto& [dof, value] : pending) {
    if (!fresh[dof]) continue;
    const auto i = static_cast<Eigen::Index>(dof);
    const double d = diagonal[dof] > 0.0 ? diagonal[dof] : 1.0;
    system.stiffness.coeffRef(i, i) = d;
    system.load[i] = d * value;
    system.constrained[dof] = value;
  }
  system.stiffness.makeCompressed();
  return system;
}

LinearSystem apply_traction(LinearSystem system, const BoundaryConditionSet& bcs) {
  if (bcs.tractions.empty()) return system;
  std::set<std::pair<std::size_t, std::size_t>> boundary;
  for (const BoundaryEdge& e : system.boundary_edges) {
    boundary.insert(std::minmax(e.nodes[0], e.nodes[1]));
  }
  for (const EdgeTraction& et : bcs.tractions) {
    require_node(system, et.nodes[0], "traction");
    require_node(system, et.nodes[1], "traction");
    if (!boundary.contains(std::minmax(et.nodes[0], et.nodes[1]))) {
      throw Error(ErrorKind::invalid_input, "traction applied to non-boundary edge (" +
                                                std::to_string(et.nodes[0]) + ", " +
                                                std::to_string(et.nodes[1]) + ")");
    }
    const double length = distance(system.nodes[et.nodes[0]], system.nodes[et.nodes[1]]);
    const Vec2 force = (0.5 * length) * et.traction;
    for (std::size_t node : et.nodes) {
      const std::size_t du = 2 * node;
      const std::size_t dv = du + 1;
      if (!system.constrained[du]) system.load[static_cast<Eigen::Index>(du)] += force.x;
      if (!system.constrained[dv]) system.load[static_cast<Eigen::Index>(dv)] += force.y;
    }
  }
  return system;
}

SolveResult solve_with_stats(const LinearSystem& system, const SolverOptions& options) {
  const auto n = static_cast<Eigen::Index>(system.dof_count());
  Eigen::VectorXd x(n);

  if (options.kind == SolverKind::direct) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(system.stiffness);
    if (ldlt.info() != Eigen::Success) {
      throw Error(ErrorKind::singular_system, "sparse LDL^T factorization failed");
    }
    const Eigen::VectorXd pivots = ldlt.vectorD();
    const double largest = pivots.cwiseAbs().maxCoeff();
    Eigen::Index worst = 0;
    const double smallest = pivots.minCoeff(&worst);
    if (!(smallest > 1e-10 * largest)) {
      std::ostringstream msg;
      msg << "stiffness matrix is singular or indefinite after constraints (pivot ratio "
          << smallest / largest << "); " << system.constrained_count()
          << " unknowns constrained, rigid-body modes are probably free";
      throw Error(ErrorKind::singular_system, msg.str());
    }
    x = ldlt.solve(system.load);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(options.cg_tolerance);
    cg.setMaxIterations(options.cg_max_iterations);
    cg.compute(system.stiffness);
    x = cg.solve(system.load);
    if (cg.info() != Eigen::Success) {
      throw Error(ErrorKind::singular_system,
                  "conjugate gradient did not converge in " + std::to_string(cg.iterations()) +
                      " iterations");
    }
  }

  const double load_norm = system.load.norm();
  const double residual_norm = (system.stiffness * x - system.load).norm();
  const double residual = load_norm > 0.0 ? residual_norm / load_norm : residual_norm;
  const double limit = load_norm > 0.0 ? 1e-10 : 1e-12;
  if (!(residual <= limit)) {
    std::ostringstream msg;
    msg << "solution residual " << residual << " exceeds " << limit;
    throw Error(ErrorKind::singular_system, msg.str());
  }

  SolveResult result;
  result.residual = residual;
  result.field.values.resize(system.nodes.size());
  for (std::size_t node = 0; node < system.nodes.size(); ++node) {
    const auto du = static_cast<Eigen::Index>(2 * node);
    double u = x[du];
    double v = x[du + 1];
    // Prescribed values are returned exactly, not as solver output.
    if (const auto& c = system.constrained[2 * node]) u = *c;
    if (const auto& c = system.constrained[2 * node + 1]) v = *c;
    result.field.values[node] = {u, v};
  }
  return result;
}

DisplacementField solve(const LinearSystem& system, const SolverOptions& options) {
  return solve_with_stats(system, options).field;
}

DisplacementField solve_problem(const Mesh& mesh, const MaterialField& materials,
                                ConstitutiveMode mode, const BoundaryConditionSet& bcs,
                                const SolverOptions& options) {
  LinearSystem system = assemble(mesh, materials, mode);
  system = apply_dirichlet(std::move(system), bcs);
  system = apply_traction(std::move(system), bcs);
  return solve(system, options);
}

BoundaryConditionSet dirichlet_from_boundary(const Mesh& mesh,
                                             const std::vector<Vec2>& inner_displacements,
                                             const std::vector<Vec2>& outer_displacements,
                                             DirichletMode mode) {
  if (!mesh.layout) {
    throw Error(ErrorKind::invalid_input, "boundary vectors need a structured annulus mesh");
  }
  const StructuredLayout& grid = *mesh.layout;
  if (inner_displacements.size() != grid.n_angular ||
      outer_displacements.size() != grid.n_angular) {
    throw Error(ErrorKind::invalid_input,
                "boundary vector count does not match the mesh angular resolution");
  }
  BoundaryConditionSet bcs;
  bcs.mode = mode;
  bcs.dirichlet.reserve(2 * grid.n_angular);
  for (std::size_t k = 0; k < grid.n_angular; ++k) {
    bcs.dirichlet.push_back({grid.node(k, 0), inner_displacements[k]});
  }
  for (std::size_t k = 0; k < grid.n_angular; ++k) {
    bcs.dirichlet.push_back({grid.node(k, grid.n_radial), outer_displacements[k]});
  }
  return bcs;
}

DisplacementField remove_rigid_motion(const Mesh& mesh, const DisplacementField& field) {
  if (field.size() != mesh.node_count()) {
    throw Error(ErrorKind::invalid_input, "displacement field does not match the mesh");
  }
  std::vector<double> w(mesh.node_count(), 0.0);
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const double a = std::abs(triangle_area(mesh, t)) / 3.0;
    for (std::size_t n : mesh.triangles[t]) w[n] += a;
  }
  double total = 0.0;
  Point2 c{0.0, 0.0};
  Vec2 mean{0.0, 0.0};
  for (std::size_t i = 0; i < w.size(); ++i) {
    total += w[i];
    c = c + w[i] * mesh.nodes[i];
    mean = mean + w[i] * field[i];
  }
  if (!(total > 0.0)) throw Error(ErrorKind::degenerate, "mesh has zero area");
  c = (1.0 / total) * c;
  mean = (1.0 / total) * mean;
  double moment = 0.0;
  double inertia = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Vec2 r = mesh.nodes[i] - c;
    moment += w[i] * cross(r, field[i]);
    inertia += w[i] * dot(r, r);
  }
  const double omega = inertia > 0.0 ? moment / inertia : 0.0;
  DisplacementField out = field;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Vec2 r = mesh.nodes[i] - c;
    out.values[i] = field[i] - mean - Vec2{-omega * r.y, omega * r.x};
  }
  return out;
}

Vec2 interpolate(const Mesh& mesh, const DisplacementField& field, std::size_t t, Point2 p) {
  const auto c = mesh.corners(t);
  const Triangle& tri = mesh.triangles[t];
  const double area2 = twice_signed_area(c[0], c[1], c[2]);
  const double l0 = twice_signed_area(p, c[1], c[2]) / area2;
  const double l1 = twice_signed_area(c[0], p, c[2]) / area2;
  const double l2 = 1.0 - l0 - l1;
  return l0 * field[tri[0]] + l1 * field[tri[1]] + l2 * field[tri[2]];
}

void write_matrix_market(std::ostream& out, const Eigen::SparseMatrix<double>& matrix) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << '\n';
  out << std::setprecision(17);
  for (Eigen::Index col = 0; col < matrix.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, col); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
}

void write_matrix_market(std::ostream& out, const Eigen::VectorXd& vector) {
  out << "%%MatrixMarket matrix array real general\n";
  out << vector.size() << " 1\n";
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < vector.size(); ++i) out << vector[i] << '\n';
}

}  // namespace cardiofem
