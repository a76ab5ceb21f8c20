#include "cardiofem/material.hpp"

#include <algorithm>
#include <sstream>
#include <string>

#include "cardiofem/error.hpp"

namespace cardiofem {

void validate(const Material& m) {
  if (!(std::isfinite(m.youngs_modulus) && m.youngs_modulus > 0.0)) {
    throw Error(ErrorKind::invalid_input, "Young's modulus must be positive and finite");
  }
  if (!(m.poisson_ratio >= 0.0 && m.poisson_ratio < 0.5)) {
    std::ostringstream msg;
    msg << "Poisson's ratio must lie in [0, 0.5), got " << m.poisson_ratio;
    throw Error(ErrorKind::invalid_input, msg.str());
  }
}

std::string_view to_string(ConstitutiveMode mode) noexcept {
  return mode == ConstitutiveMode::as_printed ? "as-printed" : "plane-strain";
}

ConstitutiveMode parse_constitutive_mode(std::string_view text) {
  if (text == "as-printed") return ConstitutiveMode::as_printed;
  if (text == "plane-strain") return ConstitutiveMode::plane_strain;
  throw Error(ErrorKind::configuration,
              "mode must be 'as-printed' or 'plane-strain', got '" + std::string(text) + "'");
}

ConstitutiveMatrix constitutive_matrix(const Material& m, ConstitutiveMode mode) {
  const double e = m.youngs_modulus;
  const double nu = m.poisson_ratio;
  if (mode == ConstitutiveMode::plane_strain && nu >= 0.5) {
    throw Error(ErrorKind::incompressible,
                "plane-strain matrix is singular for Poisson's ratio >= 0.5");
  }
  validate(m);

  Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
  if (mode == ConstitutiveMode::as_printed) {
    const double f = e / (1.0 - nu * nu);
    d << f, f * nu, 0.0,
         f * nu, f, 0.0,
         0.0, 0.0, f * (1.0 - nu) / 2.0;
  } else {
    const double f = e / ((1.0 + nu) * (1.0 - 2.0 * nu));
    d << f * (1.0 - nu), f * nu, 0.0,
         f * nu, f * (1.0 - nu), 0.0,
         0.0, 0.0, f * (1.0 - 2.0 * nu) / 2.0;
  }
  return {d, mode};
}

double AngularRegion::span_deg() const {
  const double span = end_deg - start_deg;
  if (span >= 360.0) return 360.0;
  const double wrapped = std::fmod(span, 360.0);
  return wrapped < 0.0 ? wrapped + 360.0 : wrapped;
}

bool AngularRegion::contains(double angle_rad) const {
  const double span = span_deg();
  if (span >= 360.0) return true;
  const double offset = rad_to_deg(wrap_angle(angle_rad - deg_to_rad(start_deg)));
  return offset < span;
}

bool MaterialField::is_homogeneous() const {
  return std::all_of(per_element.begin(), per_element.end(),
                     [&](const Material& m) { return m == per_element.front(); });
}

MaterialField uniform_material_field(const Mesh& mesh, const Material& m) {
  validate(m);
  return {std::vector<Material>(mesh.triangle_count(), m), {}};
}

namespace {

bool overlap(const AngularRegion& a, const AngularRegion& b) {
  if (a.span_deg() <= 0.0 || b.span_deg() <= 0.0) return false;
  if (a.span_deg() >= 360.0 || b.span_deg() >= 360.0) return true;
  // Two half-open arcs overlap iff one contains the other's start.
  return a.contains(deg_to_rad(b.start_deg)) || b.contains(deg_to_rad(a.start_deg));
}

}  // namespace

MaterialField region_material_field(const Mesh& mesh, const Material& base,
                                    const std::vector<AngularRegion>& regions, Point2 center) {
  validate(base);
  for (std::size_t i = 0; i < regions.size(); ++i) {
    if (!std::isfinite(regions[i].start_deg) || !std::isfinite(regions[i].end_deg)) {
      throw Error(ErrorKind::configuration, "region bounds must be finite");
    }
    validate(regions[i].material);
    for (std::size_t j = i + 1; j < regions.size(); ++j) {
      if (overlap(regions[i], regions[j])) {
        throw Error(ErrorKind::configuration, "material regions " + std::to_string(i) +
                                                  " and " + std::to_string(j) + " overlap");
      }
    }
  }

  MaterialField field;
  field.regions = regions;
  field.per_element.reserve(mesh.triangle_count());
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const double angle = polar_angle(triangle_centroid(mesh, t), center);
    const Material* chosen = &base;
    for (const AngularRegion& r : regions) {
      if (r.contains(angle)) {
        chosen = &r.material;
        break;
      }
    }
    field.per_element.push_back(*chosen);
  }
  return field;
}

}  // namespace cardiofem
