#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "cardiofem/fem.hpp"
#include "cardiofem/material.hpp"
#include "cardiofem/mesh.hpp"

namespace cardiofem {

/// Engineering strain components; gamma_xy is the engineering shear.
struct Strain {
  double eps_x = 0.0;
  double eps_y = 0.0;
  double gamma_xy = 0.0;
};

/// Strain of a linear triangle computed in the element's local frame (node 1 at
/// the origin, node 2 on the positive x axis) and rotated back to global axes.
Strain element_strain(const TriangleCoords& coords, const std::array<Vec2, 3>& displacements);

/// The same strain expressed in the element's local frame.
Strain element_strain_local(const TriangleCoords& coords, const std::array<Vec2, 3>& displacements);

/// Effective strain with eps_z = gamma_xz = gamma_yz = 0:
///   sqrt((ex-ey)^2 + ey^2 + ex^2 + 1.5 gxy^2) / ((1 + nu) sqrt(2))
double effective_strain(double eps_x, double eps_y, double gamma_xy, double nu);
inline double effective_strain(const Strain& s, double nu) {
  return effective_strain(s.eps_x, s.eps_y, s.gamma_xy, nu);
}

struct StrainField {
  std::vector<Strain> strains;
  std::vector<double> effective;

  std::size_t size() const noexcept { return strains.size(); }
};

StrainField strain_field(const Mesh& mesh, const DisplacementField& displacement,
                         std::span<const double> poisson_ratios);
StrainField strain_field(const Mesh& mesh, const DisplacementField& displacement,
                         const MaterialField& materials);

struct SectorStats {
  double mean_displacement = 0.0;
  double mean_effective = 0.0;
  double max_effective = 0.0;
  std::size_t count = 0;
};

struct SectorSummary {
  std::size_t n_sectors = 0;
  std::vector<SectorStats> sectors;
  double global_mean_displacement = 0.0;
  double global_mean_effective = 0.0;
  double global_max_effective = 0.0;
};

/// Sector index of a polar angle; an angle exactly on a sector boundary goes to
/// the lower-index sector.
std::size_t sector_of(double angle_rad, std::size_t n_sectors);

/// Elements are binned by the polar angle of their centroid about `center`.
/// Displacement magnitude is taken at the element centroid.
SectorSummary sector_average(const Mesh& mesh, const StrainField& strain,
                             const DisplacementField& displacement, Point2 center,
                             std::size_t n_sectors);

}  // namespace cardiofem
