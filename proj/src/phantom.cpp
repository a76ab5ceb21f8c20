#include "cardiofem/phantom.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <sstream>
#include <string>

#include "cardiofem/error.hpp"

namespace cardiofem {

double RingSpec::peak_pressure() const {
  double peak = 0.0;
  for (double p : pressures) {
    if (std::abs(p) > std::abs(peak)) peak = p;
  }
  return peak;
}

std::string_view to_string(OuterWall wall) noexcept {
  return wall == OuterWall::free ? "free" : "clamped";
}

OuterWall parse_outer_wall(std::string_view text) {
  if (text == "free") return OuterWall::free;
  if (text == "clamped") return OuterWall::clamped;
  throw Error(ErrorKind::invalid_input,
              "unknown outer wall support '" + std::string(text) + "' (free|clamped)");
}

void validate(const RingSpec& spec) {
  if (!(spec.inner_radius > 0.0 && spec.inner_radius < spec.outer_radius &&
        std::isfinite(spec.outer_radius))) {
    throw Error(ErrorKind::invalid_input, "ring radii must satisfy 0 < a < b");
  }
  if (!is_finite(spec.center)) throw Error(ErrorKind::invalid_input, "ring center must be finite");
  for (double p : spec.pressures) {
    if (!std::isfinite(p)) throw Error(ErrorKind::invalid_input, "pressures must be finite");
  }
  validate(spec.base);
}

std::vector<double> linear_pressure_ramp(double peak, std::size_t n_steps) {
  std::vector<double> out;
  out.reserve(n_steps);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    out.push_back(peak * static_cast<double>(k) / static_cast<double>(n_steps));
  }
  return out;
}

namespace {

std::vector<Point2> circle(Point2 center, double r, std::size_t n) {
  std::vector<Point2> pts;
  pts.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = two_pi * static_cast<double>(k) / static_cast<double>(n);
    pts.push_back({center.x + r * std::cos(t), center.y + r * std::sin(t)});
  }
  return pts;
}

double lame_radial(double a, double b, double p, double e, double nu, double r) {
  const double c = a * a * p / (b * b - a * a);
  return (1.0 + nu) * c / e * ((1.0 - 2.0 * nu) * r + b * b / r);
}

}  // namespace

RingModel make_ring(const RingSpec& spec, std::size_t n_angular, std::size_t n_radial) {
  validate(spec);
  const Contour inner(circle(spec.center, spec.inner_radius, n_angular), BoundaryLabel::inner);
  const Contour outer(circle(spec.center, spec.outer_radius, n_angular), BoundaryLabel::outer);
  RingModel ring{triangulate_annulus(inner, outer, n_angular, n_radial), {}};
  ring.materials = region_material_field(ring.mesh, spec.base, spec.stiff_regions, spec.center);
  return ring;
}

double lame_displacement(double a, double b, double p, double youngs_modulus, double nu,
                         double r) {
  if (!(a > 0.0 && a < b)) throw Error(ErrorKind::invalid_input, "Lamé radii must satisfy 0 < a < b");
  validate(Material{youngs_modulus, nu});
  if (!(r >= a && r <= b)) {
    std::ostringstream msg;
    msg << "radius " << r << " outside the wall [" << a << ", " << b << "]";
    throw Error(ErrorKind::invalid_input, msg.str());
  }
  return lame_radial(a, b, p, youngs_modulus, nu, r);
}

Vec2 lame_field(const RingSpec& spec, double pressure, Point2 p) {
  const Vec2 d = p - spec.center;
  const double r = norm(d);
  if (!(r > 0.0)) throw Error(ErrorKind::invalid_input, "Lamé field undefined at the center");
  if (spec.outer_wall != OuterWall::free) {
    throw Error(ErrorKind::configuration, "the Lamé oracle needs a free outer wall");
  }
  double nu = spec.base.poisson_ratio;
  double e = spec.base.youngs_modulus;
  if (spec.mode == ConstitutiveMode::as_printed) {
    // The as-printed matrix is the plane-stress law; map it onto the
    // plane-strain closed form with the equivalent constants.
    e = e * (1.0 + 2.0 * nu) / ((1.0 + nu) * (1.0 + nu));
    nu = nu / (1.0 + nu);
  }
  const double ur = lame_radial(spec.inner_radius, spec.outer_radius, pressure, e, nu, r);
  return (ur / r) * d;
}

BoundaryConditionSet lame_dirichlet(const RingSpec& spec, const Mesh& mesh, double pressure) {
  std::vector<std::size_t> boundary_nodes;
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    boundary_nodes.push_back(e.nodes[0]);
    boundary_nodes.push_back(e.nodes[1]);
  }
  std::sort(boundary_nodes.begin(), boundary_nodes.end());
  boundary_nodes.erase(std::unique(boundary_nodes.begin(), boundary_nodes.end()),
                       boundary_nodes.end());
  BoundaryConditionSet bcs;
  for (std::size_t node : boundary_nodes) {
    bcs.dirichlet.push_back({node, lame_field(spec, pressure, mesh.nodes[node])});
  }
  return bcs;
}

BoundaryConditionSet pressure_traction(const Mesh& mesh, double pressure) {
  BoundaryConditionSet bcs;
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    if (e.label != BoundaryLabel::inner) continue;
    const Vec2 d = mesh.nodes[e.nodes[1]] - mesh.nodes[e.nodes[0]];
    const double len = norm(d);
    const Vec2 outward{d.y / len, -d.x / len};
    bcs.tractions.push_back({e.nodes, (-pressure) * outward});
  }

  if (!mesh.layout) {
    throw Error(ErrorKind::invalid_input, "pressure loading needs a structured annulus mesh");
  }
  const StructuredLayout& grid = *mesh.layout;
  const std::size_t n = grid.n_angular;
  if (n % 4 == 0) {
    // Nodes on the symmetry axes: v = 0 at 0 and 180 degrees, u = 0 at 90.
    bcs.pinned.push_back({grid.node(0, 0), 1, 0.0});
    bcs.pinned.push_back({grid.node(n / 2, 0), 1, 0.0});
    bcs.pinned.push_back({grid.node(n / 4, 0), 0, 0.0});
  } else {
    // Fix one node fully and the tangential direction of a second one.
    const std::size_t first = grid.node(0, 0);
    const std::size_t second = grid.node(n / 2, 0);
    bcs.pinned.push_back({first, 0, 0.0});
    bcs.pinned.push_back({first, 1, 0.0});
    const Vec2 chord = mesh.nodes[second] - mesh.nodes[first];
    bcs.pinned.push_back({second, std::abs(chord.x) >= std::abs(chord.y) ? 1 : 0, 0.0});
  }
  return bcs;
}

DisplacementField traction_solve(const RingSpec& spec, const RingModel& ring, double pressure) {
  BoundaryConditionSet bcs = pressure_traction(ring.mesh, pressure);
  if (spec.outer_wall == OuterWall::free) {
    return remove_rigid_motion(ring.mesh,
                               solve_problem(ring.mesh, ring.materials, spec.mode, bcs));
  }
  bcs.pinned.clear();
  for (const BoundaryEdge& e : ring.mesh.boundary_edges) {
    if (e.label != BoundaryLabel::outer) continue;
    for (std::size_t n : e.nodes) bcs.dirichlet.push_back({n, {0.0, 0.0}});
  }
  return solve_problem(ring.mesh, ring.materials, spec.mode, bcs);
}

double relative_l2_error(const Mesh& mesh, const DisplacementField& field, const RingSpec& spec,
                         double pressure) {
  // Symmetric 6-point rule, exact for degree 4.
  struct QuadPoint {
    std::array<double, 3> bary;
    double weight;
  };
  constexpr double a1 = 0.445948490915965, b1 = 1.0 - 2.0 * a1, w1 = 0.223381589678011;
  constexpr double a2 = 0.091576213509771, b2 = 1.0 - 2.0 * a2, w2 = 0.109951743655322;
  static constexpr std::array<QuadPoint, 6> rule{{
      {{a1, a1, b1}, w1}, {{a1, b1, a1}, w1}, {{b1, a1, a1}, w1},
      {{a2, a2, b2}, w2}, {{a2, b2, a2}, w2}, {{b2, a2, a2}, w2},
  }};
  double err2 = 0.0;
  double ref2 = 0.0;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto c = mesh.corners(t);
    const Triangle& tri = mesh.triangles[t];
    const double area = triangle_area(mesh, t);
    for (const QuadPoint& q : rule) {
      const Point2 x = q.bary[0] * c[0] + q.bary[1] * c[1] + q.bary[2] * c[2];
      const Vec2 uh = q.bary[0] * field[tri[0]] + q.bary[1] * field[tri[1]] +
                      q.bary[2] * field[tri[2]];
      const Vec2 u = lame_field(spec, pressure, x);
      const Vec2 diff = uh - u;
      err2 += q.weight * area * dot(diff, diff);
      ref2 += q.weight * area * dot(u, u);
    }
  }
  if (ref2 == 0.0) return std::sqrt(err2);
  return std::sqrt(err2 / ref2);
}

std::vector<FrameContours> pressure_load_cycle(const RingSpec& spec,
                                               const LoadCycleOptions& options) {
  validate(spec);
  const std::size_t n = options.contour_points;
  if (options.path == LoadPath::analytic && !spec.homogeneous()) {
    throw Error(ErrorKind::configuration,
                "the analytic load path needs a homogeneous ring; use the traction FEM path");
  }
  const std::vector<Point2> inner0 = circle(spec.center, spec.inner_radius, n);
  const std::vector<Point2> outer0 = circle(spec.center, spec.outer_radius, n);

  std::vector<FrameContours> frames;
  frames.reserve(spec.pressures.size() + 1);
  frames.emplace_back(0, Contour(inner0, BoundaryLabel::inner), Contour(outer0, BoundaryLabel::outer));

  std::optional<RingModel> ring;
  if (options.path == LoadPath::traction_fem) ring = make_ring(spec, n, options.n_radial);

  for (std::size_t step = 0; step < spec.pressures.size(); ++step) {
    const double p = spec.pressures[step];
    std::vector<Point2> inner(n);
    std::vector<Point2> outer(n);
    if (options.path == LoadPath::analytic) {
      for (std::size_t k = 0; k < n; ++k) {
        inner[k] = inner0[k] + lame_field(spec, p, inner0[k]);
        outer[k] = outer0[k] + lame_field(spec, p, outer0[k]);
      }
    } else {
      const DisplacementField u = traction_solve(spec, *ring, p);
      const StructuredLayout& grid = *ring->mesh.layout;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t ni = grid.node(k, 0);
        const std::size_t no = grid.node(k, grid.n_radial);
        inner[k] = ring->mesh.nodes[ni] + u[ni];
        outer[k] = ring->mesh.nodes[no] + u[no];
      }
    }
    frames.emplace_back(step + 1, Contour(std::move(inner), BoundaryLabel::inner),
                        Contour(std::move(outer), BoundaryLabel::outer));
  }
  return frames;
}

std::vector<ConvergenceRow> lame_convergence(const RingSpec& spec, double pressure,
                                             std::size_t n_angular, std::size_t n_radial,
                                             std::size_t levels) {
  if (!spec.homogeneous()) {
    throw Error(ErrorKind::configuration, "Lamé convergence needs a homogeneous ring");
  }
  std::vector<ConvergenceRow> rows;
  for (std::size_t level = 0; level < levels; ++level) {
    const std::size_t na = n_angular << level;
    const std::size_t nr = n_radial << level;
    const RingModel ring = make_ring(spec, na, nr);
    const DisplacementField u =
        solve_problem(ring.mesh, ring.materials, spec.mode, lame_dirichlet(spec, ring.mesh, pressure));
    ConvergenceRow row{na, nr, (spec.outer_radius - spec.inner_radius) / static_cast<double>(nr),
                       relative_l2_error(ring.mesh, u, spec, pressure),
                       std::numeric_limits<double>::quiet_NaN()};
    if (!rows.empty()) {
      const ConvergenceRow& prev = rows.back();
      row.order = std::log(prev.l2_error / row.l2_error) / std::log(prev.h / row.h);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cardiofem
