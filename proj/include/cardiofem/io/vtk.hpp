#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cardiofem/geometry.hpp"
#include "cardiofem/mesh.hpp"

namespace cardiofem::io {

struct PointVectors {
  std::string name;
  std::vector<Vec2> values;
};

struct CellScalars {
  std::string name;
  std::vector<double> values;
};

/// Legacy ASCII VTK unstructured grid: POINTS (z = 0), CELLS, CELL_TYPES
/// (5, triangle), then POINT_DATA vectors and CELL_DATA scalars.
void write_vtk(std::ostream& out, const Mesh& mesh, const std::vector<PointVectors>& point_data,
               const std::vector<CellScalars>& cell_data, const std::string& title = "cardiofem");

}  // namespace cardiofem::io
