#include "cardiofem/mesh.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "cardiofem/error.hpp"

namespace cardiofem {

double triangle_area(const Mesh& mesh, std::size_t t) {
  const auto c = mesh.corners(t);
  return 0.5 * twice_signed_area(c[0], c[1], c[2]);
}

Point2 triangle_centroid(const Mesh& mesh, std::size_t t) {
  const auto c = mesh.corners(t);
  return {(c[0].x + c[1].x + c[2].x) / 3.0, (c[0].y + c[1].y + c[2].y) / 3.0};
}

double total_area(const Mesh& mesh) {
  double area = 0.0;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) area += triangle_area(mesh, t);
  return area;
}

Mesh triangulate_annulus(const Contour& inner, const Contour& outer, std::size_t n_angular,
                         std::size_t n_radial) {
  if (n_angular < 3 || n_radial < 1) {
    throw Error(ErrorKind::invalid_input, "annulus mesh needs n_angular >= 3 and n_radial >= 1");
  }
  if (inner.size() != n_angular || outer.size() != n_angular) {
    throw Error(ErrorKind::invalid_input,
                "contours must be resampled to n_angular points before meshing");
  }

  double scale = 0.0;
  for (std::size_t k = 0; k < n_angular; ++k) {
    scale = std::max({scale, norm(inner[k] - outer[0]), norm(outer[k] - outer[0])});
  }
  for (std::size_t k = 0; k < n_angular; ++k) {
    if (distance(inner[k], outer[k]) <= 1e-12 * std::max(scale, 1.0)) {
      throw Error(ErrorKind::degenerate,
                  "zero wall thickness at angle index " + std::to_string(k));
    }
  }

  Mesh mesh;
  mesh.layout = StructuredLayout{n_angular, n_radial};
  const StructuredLayout& grid = *mesh.layout;
  mesh.nodes.reserve(n_angular * (n_radial + 1));
  for (std::size_t j = 0; j <= n_radial; ++j) {
    const double f = static_cast<double>(j) / static_cast<double>(n_radial);
    for (std::size_t k = 0; k < n_angular; ++k) {
      const Point2 a = inner[k];
      const Point2 b = outer[k];
      mesh.nodes.push_back(j == n_radial ? b : a + f * (b - a));
    }
  }

  mesh.triangles.reserve(2 * n_angular * n_radial);
  for (std::size_t j = 0; j < n_radial; ++j) {
    for (std::size_t k = 0; k < n_angular; ++k) {
      const std::size_t a = grid.node(k, j);
      const std::size_t b = grid.node(k + 1, j);
      const std::size_t c = grid.node(k + 1, j + 1);
      const std::size_t d = grid.node(k, j + 1);
      mesh.triangles.push_back({a, c, b});
      mesh.triangles.push_back({a, d, c});
    }
  }

  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    if (triangle_area(mesh, t) <= 0.0) {
      std::ostringstream msg;
      msg << "inner and outer contours cross: triangle " << t << " (angle index "
          << (t / 2) % n_angular << ", layer " << t / (2 * n_angular)
          << ") has non-positive area";
      throw Error(ErrorKind::geometry, msg.str());
    }
  }

  for (std::size_t k = 0; k < n_angular; ++k) {
    mesh.boundary_edges.push_back({{grid.node(k + 1, 0), grid.node(k, 0)}, BoundaryLabel::inner});
  }
  for (std::size_t k = 0; k < n_angular; ++k) {
    mesh.boundary_edges.push_back(
        {{grid.node(k, n_radial), grid.node(k + 1, n_radial)}, BoundaryLabel::outer});
  }
  return mesh;
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const MeshCheck& c) { return c.passed || c.warning_only; });
}

bool ValidationReport::quality_warning() const {
  return std::any_of(checks.begin(), checks.end(),
                     [](const MeshCheck& c) { return c.warning_only && !c.passed; });
}

const MeshCheck* ValidationReport::find(const std::string& name) const {
  for (const MeshCheck& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

using Edge = std::pair<std::size_t, std::size_t>;

Edge undirected(std::size_t a, std::size_t b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Number of closed loops in an edge set, or nullopt when some vertex does not
/// have degree exactly two.
std::optional<std::size_t> count_loops(const std::vector<Edge>& edges) {
  std::map<std::size_t, std::vector<std::size_t>> adjacency;
  for (const auto& [a, b] : edges) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  for (const auto& [v, nbrs] : adjacency) {
    if (nbrs.size() != 2) return std::nullopt;
  }
  std::set<std::size_t> seen;
  std::size_t loops = 0;
  for (const auto& [start, nbrs] : adjacency) {
    if (seen.contains(start)) continue;
    ++loops;
    std::vector<std::size_t> stack{start};
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      if (!seen.insert(v).second) continue;
      for (std::size_t w : adjacency[v]) {
        if (!seen.contains(w)) stack.push_back(w);
      }
    }
  }
  return loops;
}

double min_triangle_angle_deg(const std::array<Point2, 3>& c) {
  double best = 180.0;
  for (int i = 0; i < 3; ++i) {
    const Vec2 u = c[(i + 1) % 3] - c[i];
    const Vec2 v = c[(i + 2) % 3] - c[i];
    const double angle = std::atan2(std::abs(cross(u, v)), dot(u, v));
    best = std::min(best, rad_to_deg(angle));
  }
  return best;
}

}  // namespace

ValidationReport validate(const Mesh& mesh, double min_angle_deg) {
  ValidationReport report;
  const std::size_t nv = mesh.node_count();

  bool indices_ok = true;
  std::string indices_detail = "all node references in range";
  for (std::size_t t = 0; t < mesh.triangle_count() && indices_ok; ++t) {
    for (std::size_t v : mesh.triangles[t]) {
      if (v >= nv) {
        indices_ok = false;
        indices_detail = "triangle " + std::to_string(t) + " references node " +
                         std::to_string(v);
        break;
      }
    }
  }
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    if (e.nodes[0] >= nv || e.nodes[1] >= nv) {
      indices_ok = false;
      indices_detail = "boundary edge references a node out of range";
    }
  }
  report.checks.push_back({"indices", indices_ok, indices_detail});
  if (!indices_ok) return report;

  {
    std::vector<std::size_t> order(nv);
    for (std::size_t i = 0; i < nv; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return mesh.nodes[a].x < mesh.nodes[b].x;
    });
    bool dup = false;
    std::string detail = "no coincident nodes";
    for (std::size_t i = 0; i < nv && !dup; ++i) {
      for (std::size_t j = i + 1; j < nv; ++j) {
        const Point2 a = mesh.nodes[order[i]];
        const Point2 b = mesh.nodes[order[j]];
        if (b.x - a.x > 1e-12) break;
        if (distance(a, b) <= 1e-12) {
          dup = true;
          detail = "nodes " + std::to_string(order[i]) + " and " + std::to_string(order[j]) +
                   " coincide";
          break;
        }
      }
    }
    report.checks.push_back({"duplicate_nodes", !dup, detail});
  }

  {
    std::size_t bad = 0;
    std::size_t first_bad = 0;
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
      if (triangle_area(mesh, t) <= 0.0) {
        if (bad == 0) first_bad = t;
        ++bad;
      }
    }
    report.checks.push_back({"area_positive", bad == 0,
                             bad == 0 ? "all triangles counter-clockwise"
                                      : std::to_string(bad) +
                                            " triangle(s) with non-positive area, first " +
                                            std::to_string(first_bad)});
  }

  std::map<Edge, int> edge_use;
  for (const Triangle& tri : mesh.triangles) {
    for (int i = 0; i < 3; ++i) ++edge_use[undirected(tri[i], tri[(i + 1) % 3])];
  }
  {
    const auto v = static_cast<long long>(nv);
    const auto e = static_cast<long long>(edge_use.size());
    const auto f = static_cast<long long>(mesh.triangle_count());
    const long long chi = v - e + f;
    report.checks.push_back({"euler", chi == 0,
                             "V - E + F = " + std::to_string(v) + " - " + std::to_string(e) +
                                 " + " + std::to_string(f) + " = " + std::to_string(chi)});
  }

  std::vector<Edge> topo_boundary;
  bool manifold = true;
  for (const auto& [edge, uses] : edge_use) {
    if (uses == 1) topo_boundary.push_back(edge);
    if (uses > 2) manifold = false;
  }
  {
    const auto loops = count_loops(topo_boundary);
    const bool ok = manifold && loops && *loops == 2;
    std::string detail;
    if (!manifold) {
      detail = "an edge is shared by more than two triangles";
    } else if (!loops) {
      detail = "boundary vertices without exactly two boundary edges";
    } else {
      detail = std::to_string(*loops) + " closed boundary loop(s)";
    }
    report.checks.push_back({"boundary_loops", ok, detail});
  }

  {
    std::set<Edge> labeled;
    std::vector<Edge> inner_edges;
    std::vector<Edge> outer_edges;
    for (const BoundaryEdge& be : mesh.boundary_edges) {
      const Edge e = undirected(be.nodes[0], be.nodes[1]);
      labeled.insert(e);
      (be.label == BoundaryLabel::inner ? inner_edges : outer_edges).push_back(e);
    }
    const std::set<Edge> topo(topo_boundary.begin(), topo_boundary.end());
    const auto inner_loops = count_loops(inner_edges);
    const auto outer_loops = count_loops(outer_edges);
    const bool ok = labeled == topo && inner_loops == std::optional<std::size_t>(1) &&
                    outer_loops == std::optional<std::size_t>(1);
    report.checks.push_back(
        {"boundary_labels", ok,
         ok ? "labeled inner/outer loops match the mesh boundary"
            : "labeled boundary edges do not form one inner and one outer loop matching "
              "the mesh boundary"});
  }

  double min_angle = 180.0;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    min_angle = std::min(min_angle, min_triangle_angle_deg(mesh.corners(t)));
  }
  report.min_angle_deg = min_angle;
  {
    std::ostringstream msg;
    msg << "minimum interior angle " << min_angle << " deg (threshold " << min_angle_deg
        << ")";
    report.checks.push_back({"min_angle", min_angle >= min_angle_deg, msg.str(), true});
  }
  return report;
}

bool triangle_contains(const std::array<Point2, 3>& tri, Point2 p) {
  const double area2 = twice_signed_area(tri[0], tri[1], tri[2]);
  if (area2 == 0.0) return false;
  const double l0 = twice_signed_area(p, tri[1], tri[2]) / area2;
  const double l1 = twice_signed_area(tri[0], p, tri[2]) / area2;
  const double l2 = 1.0 - l0 - l1;
  constexpr double tol = -1e-12;
  return l0 >= tol && l1 >= tol && l2 >= tol;
}

PointLocator::PointLocator(const Mesh& mesh) : mesh_(&mesh) {
  if (mesh.nodes.empty() || mesh.triangles.empty()) return;
  Point2 lo = mesh.nodes.front();
  Point2 hi = lo;
  for (const Point2& p : mesh.nodes) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  const auto side = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(mesh.triangle_count()) / 2.0)));
  nx_ = ny_ = std::max<std::size_t>(side, 1);
  const double pad = 1e-9 * std::max({hi.x - lo.x, hi.y - lo.y, 1.0});
  lo_ = {lo.x - pad, lo.y - pad};
  cell_w_ = (hi.x - lo.x + 2 * pad) / static_cast<double>(nx_);
  cell_h_ = (hi.y - lo.y + 2 * pad) / static_cast<double>(ny_);
  buckets_.assign(nx_ * ny_, {});

  auto cell_x = [&](double x) {
    return std::min(nx_ - 1, static_cast<std::size_t>(std::max(0.0, (x - lo_.x) / cell_w_)));
  };
  auto cell_y = [&](double y) {
    return std::min(ny_ - 1, static_cast<std::size_t>(std::max(0.0, (y - lo_.y) / cell_h_)));
  };
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto c = mesh.corners(t);
    const double x0 = std::min({c[0].x, c[1].x, c[2].x}) - pad;
    const double x1 = std::max({c[0].x, c[1].x, c[2].x}) + pad;
    const double y0 = std::min({c[0].y, c[1].y, c[2].y}) - pad;
    const double y1 = std::max({c[0].y, c[1].y, c[2].y}) + pad;
    for (std::size_t iy = cell_y(y0); iy <= cell_y(y1); ++iy) {
      for (std::size_t ix = cell_x(x0); ix <= cell_x(x1); ++ix) {
        buckets_[iy * nx_ + ix].push_back(t);
      }
    }
  }
}

std::optional<std::size_t> PointLocator::locate(Point2 p) const {
  if (buckets_.empty()) return std::nullopt;
  const double fx = (p.x - lo_.x) / cell_w_;
  const double fy = (p.y - lo_.y) / cell_h_;
  if (!(fx >= 0.0 && fy >= 0.0 && fx < static_cast<double>(nx_) &&
        fy < static_cast<double>(ny_))) {
    return std::nullopt;
  }
  const auto& bucket =
      buckets_[static_cast<std::size_t>(fy) * nx_ + static_cast<std::size_t>(fx)];
  // Buckets are filled in ascending triangle order.
  for (std::size_t t : bucket) {
    if (triangle_contains(mesh_->corners(t), p)) return t;
  }
  return std::nullopt;
}

std::optional<std::size_t> locate_element(const Mesh& mesh, Point2 p) {
  return PointLocator(mesh).locate(p);
}

}  // namespace cardiofem
