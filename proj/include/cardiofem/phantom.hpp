#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "cardiofem/contour.hpp"
#include "cardiofem/fem.hpp"
#include "cardiofem/material.hpp"
#include "cardiofem/mesh.hpp"
#include "cardiofem/strain.hpp"

namespace cardiofem {

/// Support of the outer wall. A free wall is traction-free; a clamped wall is
/// held at zero displacement, as if embedded in rigid surroundings.
enum class OuterWall { free, clamped };

std::string_view to_string(OuterWall wall) noexcept;
OuterWall parse_outer_wall(std::string_view text);

/// Pressurized ring: internal pressure on r = inner_radius, outer wall
/// supported per `outer_wall`. `pressures` is the load history, one value per load step.
struct RingSpec {
  double inner_radius = 1.0;
  double outer_radius = 2.0;
  Point2 center{0.0, 0.0};
  Material base{};
  std::vector<AngularRegion> stiff_regions;
  std::vector<double> pressures{1.0};
  ConstitutiveMode mode = ConstitutiveMode::plane_strain;
  OuterWall outer_wall = OuterWall::free;

  bool homogeneous() const noexcept { return stiff_regions.empty(); }
  double peak_pressure() const;
};

/// Throws invalid_input unless 0 < a < b and all pressures are finite.
void validate(const RingSpec& spec);

/// `n_steps` equal increments ending at `peak`: peak * k / n_steps, k = 1..n_steps.
std::vector<double> linear_pressure_ramp(double peak, std::size_t n_steps);

struct RingModel {
  Mesh mesh;
  MaterialField materials;
};

/// Circles sampled at n_angular uniform angles, triangulated and assigned
/// materials by angular region.
RingModel make_ring(const RingSpec& spec, std::size_t n_angular, std::size_t n_radial);

/// Plane-strain radial displacement of a thick-walled cylinder under internal
/// pressure p with a free outer wall:
///   u(r) = (1 + nu) a^2 p / (E (b^2 - a^2)) * ((1 - 2 nu) r + b^2 / r)
/// Requires a <= r <= b.
double lame_displacement(double a, double b, double p, double youngs_modulus, double nu,
                         double r);

/// Radial Lamé field evaluated as a vector at any point other than the center.
/// Defined for a free outer wall only.
/// The closed form is used as is outside [a, b], which the polygonal mesh
/// boundary needs near the curved walls.
Vec2 lame_field(const RingSpec& spec, double pressure, Point2 p);

/// Nodal Dirichlet data on every boundary node taken from the Lamé field.
BoundaryConditionSet lame_dirichlet(const RingSpec& spec, const Mesh& mesh, double pressure);

/// Uniform pressure on the inner wall as edge tractions, plus three pinned
/// unknowns that remove the rigid-body modes without reacting to a
/// self-equilibrated load.
BoundaryConditionSet pressure_traction(const Mesh& mesh, double pressure);

/// Pressure-loaded solve; supports inhomogeneous material. With a free outer
/// wall the result has its rigid-body component removed, since tractions alone
/// leave it undetermined. A clamped outer wall adds zero Dirichlet data there.
DisplacementField traction_solve(const RingSpec& spec, const RingModel& ring, double pressure);

/// Relative L2 norm of (u_h - u_exact) over the mesh, by 6-point quadrature.
double relative_l2_error(const Mesh& mesh, const DisplacementField& field,
                         const RingSpec& spec, double pressure);

enum class LoadPath { analytic, traction_fem };

struct LoadCycleOptions {
  LoadPath path = LoadPath::analytic;
  std::size_t contour_points = 64;
  std::size_t n_radial = 8;  // traction_fem path only
};

/// Frame 0 is the unloaded ring; frame k holds the wall contours displaced by
/// the solution under pressures[k - 1]. Contour points sit at uniform angles.
std::vector<FrameContours> pressure_load_cycle(const RingSpec& spec,
                                               const LoadCycleOptions& options = {});

struct ConvergenceRow {
  std::size_t n_angular;
  std::size_t n_radial;
  double h;            // radial element size (b - a) / n_radial
  double l2_error;     // relative
  double order;        // observed against the previous row; NaN on the first
};

/// Dirichlet solves with Lamé boundary data on successive uniform refinements.
std::vector<ConvergenceRow> lame_convergence(const RingSpec& spec, double pressure,
                                             std::size_t n_angular, std::size_t n_radial,
                                             std::size_t levels);

}  // namespace cardiofem
