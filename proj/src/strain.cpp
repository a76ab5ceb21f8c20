#include "cardiofem/strain.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "cardiofem/error.hpp"

namespace cardiofem {

namespace {

struct LocalFrame {
  double cos_a;
  double sin_a;
  double x2;
  double x3;
  double y3;

  Vec2 to_local(Vec2 v) const { return {cos_a * v.x + sin_a * v.y, -sin_a * v.x + cos_a * v.y}; }
};

LocalFrame local_frame(const TriangleCoords& c) {
  if (!(twice_signed_area(c[0], c[1], c[2]) > 0.0)) {
    throw Error(ErrorKind::degenerate, "strain requested on a degenerate or clockwise triangle");
  }
  const Vec2 e12 = c[1] - c[0];
  const double len = norm(e12);
  LocalFrame f{e12.x / len, e12.y / len, len, 0.0, 0.0};
  const Vec2 p3 = f.to_local(c[2] - c[0]);
  f.x3 = p3.x;
  f.y3 = p3.y;
  if (!(f.x2 > 0.0) || f.y3 == 0.0) {
    throw Error(ErrorKind::degenerate, "triangle collapses in its local frame");
  }
  return f;
}

Strain local_strain(const LocalFrame& f, const std::array<Vec2, 3>& d) {
  const Vec2 d1 = f.to_local(d[0]);
  const Vec2 d2 = f.to_local(d[1]);
  const Vec2 d3 = f.to_local(d[2]);
  const double x2 = f.x2;
  const double x3 = f.x3;
  const double y3 = f.y3;
  const double k1 = (x3 - x2) / (x2 * y3);
  const double k2 = -x3 / (x2 * y3);
  const double k3 = 1.0 / y3;
  Strain s;
  s.eps_x = (d2.x - d1.x) / x2;
  s.eps_y = k1 * d1.y + k2 * d2.y + k3 * d3.y;
  s.gamma_xy = k1 * d1.x - d1.y / x2 + k2 * d2.x + d2.y / x2 + k3 * d3.x;
  return s;
}

}  // namespace

Strain element_strain_local(const TriangleCoords& coords, const std::array<Vec2, 3>& displacements) {
  return local_strain(local_frame(coords), displacements);
}

Strain element_strain(const TriangleCoords& coords, const std::array<Vec2, 3>& displacements) {
  const LocalFrame f = local_frame(coords);
  const Strain l = local_strain(f, displacements);
  // eps_global = R eps_local R^T with R = [[c, -s], [s, c]].
  const double c = f.cos_a;
  const double s = f.sin_a;
  const double exy = 0.5 * l.gamma_xy;
  Strain g;
  g.eps_x = c * c * l.eps_x - 2.0 * c * s * exy + s * s * l.eps_y;
  g.eps_y = s * s * l.eps_x + 2.0 * c * s * exy + c * c * l.eps_y;
  g.gamma_xy = 2.0 * (c * s * (l.eps_x - l.eps_y) + (c * c - s * s) * exy);
  return g;
}

double effective_strain(double eps_x, double eps_y, double gamma_xy, double nu) {
  const double sum = (eps_x * eps_x + eps_y * eps_y) + (eps_x - eps_y) * (eps_x - eps_y) +
                     1.5 * gamma_xy * gamma_xy;
  return std::sqrt(sum) / ((1.0 + nu) * std::numbers::sqrt2);
}

StrainField strain_field(const Mesh& mesh, const DisplacementField& displacement,
                         std::span<const double> poisson_ratios) {
  if (displacement.size() != mesh.node_count()) {
    throw Error(ErrorKind::invalid_input, "displacement field does not cover every mesh node");
  }
  if (poisson_ratios.size() != mesh.triangle_count()) {
    throw Error(ErrorKind::invalid_input, "one Poisson's ratio per element is required");
  }
  StrainField field;
  field.strains.reserve(mesh.triangle_count());
  field.effective.reserve(mesh.triangle_count());
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    Strain s;
    try {
      s = element_strain(mesh.corners(t),
                         {displacement[tri[0]], displacement[tri[1]], displacement[tri[2]]});
    } catch (const Error& e) {
      throw e.with_context("element " + std::to_string(t));
    }
    field.strains.push_back(s);
    field.effective.push_back(effective_strain(s, poisson_ratios[t]));
  }
  return field;
}

StrainField strain_field(const Mesh& mesh, const DisplacementField& displacement,
                         const MaterialField& materials) {
  std::vector<double> nu;
  nu.reserve(materials.size());
  for (const Material& m : materials.per_element) nu.push_back(m.poisson_ratio);
  return strain_field(mesh, displacement, nu);
}

std::size_t sector_of(double angle_rad, std::size_t n_sectors) {
  const double a = wrap_angle(angle_rad);
  const double width = two_pi / static_cast<double>(n_sectors);
  auto s = static_cast<std::size_t>(a / width);
  if (s >= n_sectors) s = n_sectors - 1;
  if (s > 0 && a == static_cast<double>(s) * width) --s;
  return s;
}

SectorSummary sector_average(const Mesh& mesh, const StrainField& strain,
                             const DisplacementField& displacement, Point2 center,
                             std::size_t n_sectors) {
  if (n_sectors < 1) throw Error(ErrorKind::invalid_input, "need at least one sector");
  if (strain.size() != mesh.triangle_count() || displacement.size() != mesh.node_count()) {
    throw Error(ErrorKind::invalid_input, "fields do not match the mesh");
  }
  SectorSummary summary;
  summary.n_sectors = n_sectors;
  summary.sectors.assign(n_sectors, {});
  std::vector<double> disp_sum(n_sectors, 0.0);
  std::vector<double> eff_sum(n_sectors, 0.0);
  double disp_total = 0.0;
  double eff_total = 0.0;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    const Vec2 at_centroid = (1.0 / 3.0) * (displacement[tri[0]] + displacement[tri[1]] +
                                            displacement[tri[2]]);
    const double magnitude = norm(at_centroid);
    const std::size_t s = sector_of(polar_angle(triangle_centroid(mesh, t), center), n_sectors);
    SectorStats& stats = summary.sectors[s];
    ++stats.count;
    disp_sum[s] += magnitude;
    eff_sum[s] += strain.effective[t];
    stats.max_effective = std::max(stats.max_effective, strain.effective[t]);
    disp_total += magnitude;
    eff_total += strain.effective[t];
    summary.global_max_effective = std::max(summary.global_max_effective, strain.effective[t]);
  }
  for (std::size_t s = 0; s < n_sectors; ++s) {
    SectorStats& stats = summary.sectors[s];
    if (stats.count == 0) continue;
    stats.mean_displacement = disp_sum[s] / static_cast<double>(stats.count);
    stats.mean_effective = eff_sum[s] / static_cast<double>(stats.count);
  }
  if (mesh.triangle_count() > 0) {
    const auto n = static_cast<double>(mesh.triangle_count());
    summary.global_mean_displacement = disp_total / n;
    summary.global_mean_effective = eff_total / n;
  }
  return summary;
}

}  // namespace cardiofem
