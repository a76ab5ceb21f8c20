#include "cardiofem/io/vtk.hpp"

#include <iomanip>
#include <ostream>

#include "cardiofem/error.hpp"

namespace cardiofem::io {

void write_vtk(std::ostream& out, const Mesh& mesh, const std::vector<PointVectors>& point_data,
               const std::vector<CellScalars>& cell_data, const std::string& title) {
  for (const PointVectors& f : point_data) {
    if (f.values.size() != mesh.node_count()) {
      throw Error(ErrorKind::invalid_input, "point field '" + f.name + "' does not match the mesh");
    }
  }
  for (const CellScalars& f : cell_data) {
    if (f.values.size() != mesh.triangle_count()) {
      throw Error(ErrorKind::invalid_input, "cell field '" + f.name + "' does not match the mesh");
    }
  }
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << std::setprecision(17);
  out << "POINTS " << mesh.node_count() << " double\n";
  for (const Point2& p : mesh.nodes) out << p.x << ' ' << p.y << " 0\n";
  out << "CELLS " << mesh.triangle_count() << ' ' << 4 * mesh.triangle_count() << '\n';
  for (const Triangle& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.triangle_count() << '\n';
  for (std::size_t i = 0; i < mesh.triangle_count(); ++i) out << "5\n";
  if (!point_data.empty()) {
    out << "POINT_DATA " << mesh.node_count() << '\n';
    for (const PointVectors& f : point_data) {
      out << "VECTORS " << f.name << " double\n";
      for (const Vec2& v : f.values) out << v.x << ' ' << v.y << " 0\n";
    }
  }
  if (!cell_data.empty()) {
    out << "CELL_DATA " << mesh.triangle_count() << '\n';
    for (const CellScalars& f : cell_data) {
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : f.values) out << v << '\n';
    }
  }
}

}  // namespace cardiofem::io
