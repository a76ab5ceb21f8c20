#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cardiofem/contour.hpp"

namespace cardiofem::io {

/// One row of the contour table:
/// subject_id,slice,frame,boundary,point_index,x,y
struct ContourRow {
  std::string subject_id;
  std::size_t slice = 0;
  std::size_t frame = 0;
  BoundaryLabel boundary = BoundaryLabel::inner;
  std::size_t point_index = 0;
  double x = 0.0;
  double y = 0.0;
};

/// Parses the header-led CSV. Errors name the offending line.
std::vector<ContourRow> read_contour_csv(std::istream& in, const std::string& source = "<csv>");

/// Writes rows in the given order with round-trip precision.
void write_contour_csv(std::ostream& out, const std::vector<ContourRow>& rows);

/// JSON mirror of the CSV: {"subject_id": ..., "points": [{"slice", "frame",
/// "boundary", "point_index", "x", "y"}, ...]}.
std::vector<ContourRow> read_contour_json(std::istream& in, const std::string& source = "<json>");
void write_contour_json(std::ostream& out, const std::vector<ContourRow>& rows);

}  // namespace cardiofem::io
