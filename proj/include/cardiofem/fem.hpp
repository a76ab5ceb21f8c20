#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cardiofem/material.hpp"
#include "cardiofem/mesh.hpp"

namespace cardiofem {

using ElementMatrix = Eigen::Matrix<double, 6, 6>;
using StrainDisplacementMatrix = Eigen::Matrix<double, 3, 6>;
using TriangleCoords = std::array<Point2, 3>;

/// Constant B of the linear triangle: (eps_x, eps_y, gamma_xy) = B * (u1 v1 u2 v2 u3 v3).
/// Throws ErrorKind::degenerate for non-positive area.
StrainDisplacementMatrix strain_displacement_matrix(const TriangleCoords& coords);

/// area * B^T D B (unit thickness).
ElementMatrix element_stiffness(const TriangleCoords& coords, const ConstitutiveMatrix& d);

enum class DirichletMode { nodal, edge_average };

struct NodalDisplacement {
  std::size_t node;
  Vec2 value;
};

/// One displacement component of one node; component 0 = u, 1 = v.
struct DofConstraint {
  std::size_t node;
  int component;
  double value;
};

/// Force per unit length on a boundary edge given by its end nodes.
struct EdgeTraction {
  std::array<std::size_t, 2> nodes;
  Vec2 traction;
};

struct BoundaryConditionSet {
  std::vector<NodalDisplacement> dirichlet;
  std::vector<DofConstraint> pinned;
  std::vector<EdgeTraction> tractions;
  DirichletMode mode = DirichletMode::nodal;
};

/// K U = F over interleaved unknowns (u0, v0, u1, v1, ...). Constrained
/// unknowns are eliminated symmetrically: their rows and columns are zeroed,
/// the diagonal keeps its assembled value and the load carries the correction.
struct LinearSystem {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd load;
  std::vector<std::optional<double>> constrained;
  std::vector<Point2> nodes;
  std::vector<BoundaryEdge> boundary_edges;

  std::size_t dof_count() const noexcept { return static_cast<std::size_t>(load.size()); }
  std::size_t constrained_count() const;
};

struct DisplacementField {
  std::vector<Vec2> values;

  std::size_t size() const noexcept { return values.size(); }
  const Vec2& operator[](std::size_t node) const { return values[node]; }
  static DisplacementField zeros(std::size_t nodes) { return {std::vector<Vec2>(nodes)}; }
};

/// Scatter-add of element stiffness matrices. Zero load (no body force).
LinearSystem assemble(const Mesh& mesh, const MaterialField& materials, ConstitutiveMode mode);

/// Imposes prescribed displacements. In edge_average mode the value at a
/// boundary node is the mean of (u_i + u_j) / 2 over its two incident boundary
/// edges. Repeating a constraint with a value differing by more than 1e-9 is a
/// constraint_conflict error.
LinearSystem apply_dirichlet(LinearSystem system, const BoundaryConditionSet& bcs);

/// Consistent edge load: length * t / 2 added to each end node. Loads on
/// constrained unknowns are dropped.
LinearSystem apply_traction(LinearSystem system, const BoundaryConditionSet& bcs);

enum class SolverKind { direct, conjugate_gradient };

struct SolverOptions {
  SolverKind kind = SolverKind::direct;
  double cg_tolerance = 1e-14;
  int cg_max_iterations = 20000;
};

struct SolveResult {
  DisplacementField field;
  double residual = 0.0;  // relative, or absolute when the load is zero
};

SolveResult solve_with_stats(const LinearSystem& system, const SolverOptions& options = {});

/// Sparse LDL^T (or Jacobi-preconditioned CG). Throws singular_system when
/// rigid modes are left unconstrained or the residual contract is missed.
DisplacementField solve(const LinearSystem& system, const SolverOptions& options = {});

/// assemble + apply_dirichlet + apply_traction + solve.
DisplacementField solve_problem(const Mesh& mesh, const MaterialField& materials,
                                ConstitutiveMode mode, const BoundaryConditionSet& bcs,
                                const SolverOptions& options = {});

/// Nodal Dirichlet data for every boundary node of a structured annulus mesh
/// from matched inner/outer boundary vectors (angle index k -> node (k, 0) and
/// (k, n_radial)).
BoundaryConditionSet dirichlet_from_boundary(const Mesh& mesh,
                                             const std::vector<Vec2>& inner_displacements,
                                             const std::vector<Vec2>& outer_displacements,
                                             DirichletMode mode = DirichletMode::nodal);

/// Subtracts the least-squares rigid motion (translation plus infinitesimal
/// rotation about the weighted centroid), with lumped nodal area weights.
DisplacementField remove_rigid_motion(const Mesh& mesh, const DisplacementField& field);

/// Linear interpolation of the field inside triangle `t` at point `p`.
Vec2 interpolate(const Mesh& mesh, const DisplacementField& field, std::size_t t, Point2 p);

/// Matrix Market coordinate dump (symmetric entries written in full).
void write_matrix_market(std::ostream& out, const Eigen::SparseMatrix<double>& matrix);
void write_matrix_market(std::ostream& out, const Eigen::VectorXd& vector);

}  // namespace cardiofem
