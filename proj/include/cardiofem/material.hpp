#pragma once

#include <Eigen/Core>
#include <string_view>
#include <vector>

#include "cardiofem/geometry.hpp"
#include "cardiofem/mesh.hpp"

namespace cardiofem {

/// Isotropic linear elastic constants. Valid when E > 0 and 0 <= nu < 0.5.
struct Material {
  double youngs_modulus = 1e4;
  double poisson_ratio = 0.3;

  friend bool operator==(const Material&, const Material&) = default;
};

/// Throws invalid_input when the constants violate the Material invariant.
void validate(const Material& m);

/// Which 3x3 stress-strain relation to build.
///  - as_printed:   E/(1-nu^2) [[1,nu,0],[nu,1,0],[0,0,(1-nu)/2]]
///  - plane_strain: E/((1+nu)(1-2nu)) [[1-nu,nu,0],[nu,1-nu,0],[0,0,(1-2nu)/2]]
enum class ConstitutiveMode { as_printed, plane_strain };

std::string_view to_string(ConstitutiveMode mode) noexcept;
ConstitutiveMode parse_constitutive_mode(std::string_view text);

struct ConstitutiveMatrix {
  Eigen::Matrix3d values;
  ConstitutiveMode mode;
};

/// Relates (eps_x, eps_y, gamma_xy) to (sigma_x, sigma_y, tau_xy). Zero initial
/// stress. Plane-strain mode rejects nu >= 0.5 with ErrorKind::incompressible.
ConstitutiveMatrix constitutive_matrix(const Material& m, ConstitutiveMode mode);

/// Angular interval [start_deg, end_deg) measured counter-clockwise about the
/// field center; intervals may wrap through 0. A span of 360 degrees covers
/// the full circle.
struct AngularRegion {
  double start_deg;
  double end_deg;
  Material material;

  bool contains(double angle_rad) const;
  double span_deg() const;
};

struct MaterialField {
  std::vector<Material> per_element;
  std::vector<AngularRegion> regions;

  const Material& operator[](std::size_t element) const { return per_element[element]; }
  std::size_t size() const noexcept { return per_element.size(); }
  bool is_homogeneous() const;
};

MaterialField uniform_material_field(const Mesh& mesh, const Material& m);

/// Assigns each element by the polar angle of its centroid about `center`;
/// elements outside every region get `base`. Overlapping regions are a
/// configuration error.
MaterialField region_material_field(const Mesh& mesh, const Material& base,
                                    const std::vector<AngularRegion>& regions, Point2 center);

}  // namespace cardiofem
