#include "cardiofem/io/contour_csv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <charconv>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cardiofem/error.hpp"

namespace cardiofem::io {

namespace {

constexpr std::array<std::string_view, 7> columns{"subject_id", "slice", "frame", "boundary",
                                                  "point_index", "x", "y"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Error row_error(const std::string& source, std::size_t line, const std::string& what) {
  return Error(ErrorKind::invalid_input, source + ":" + std::to_string(line) + ": " + what);
}

std::size_t parse_index(std::string_view text, const std::string& source, std::size_t line,
                        std::string_view column) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw row_error(source, line, "column '" + std::string(column) +
                                      "' expects a non-negative integer, got '" +
                                      std::string(text) + "'");
  }
  return value;
}

double parse_real(std::string_view text, const std::string& source, std::size_t line,
                  std::string_view column) {
  // std::from_chars for double is missing from older libstdc++ releases.
  const std::string copy(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(copy, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (copy.empty() || used != copy.size() || !std::isfinite(value)) {
    throw row_error(source, line, "column '" + std::string(column) +
                                      "' expects a finite number, got '" + copy + "'");
  }
  return value;
}

}  // namespace

std::vector<ContourRow> read_contour_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::invalid_input, source + ": empty contour file (header row required)");
  }
  ++line_no;
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split(line);
  std::array<std::size_t, columns.size()> position{};
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const auto it = std::find(header.begin(), header.end(), columns[c]);
    if (it == header.end()) {
      throw row_error(source, 1, "missing column '" + std::string(columns[c]) + "' in header");
    }
    position[c] = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<ContourRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw row_error(source, line_no, "expected " + std::to_string(header.size()) +
                                           " fields, got " + std::to_string(fields.size()));
    }
    ContourRow row;
    row.subject_id = std::string(fields[position[0]]);
    row.slice = parse_index(fields[position[1]], source, line_no, columns[1]);
    row.frame = parse_index(fields[position[2]], source, line_no, columns[2]);
    try {
      row.boundary = parse_boundary_label(fields[position[3]]);
    } catch (const Error& e) {
      throw row_error(source, line_no, e.what());
    }
    row.point_index = parse_index(fields[position[4]], source, line_no, columns[4]);
    row.x = parse_real(fields[position[5]], source, line_no, columns[5]);
    row.y = parse_real(fields[position[6]], source, line_no, columns[6]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_contour_csv(std::ostream& out, const std::vector<ContourRow>& rows) {
  out << "subject_id,slice,frame,boundary,point_index,x,y\n";
  out << std::setprecision(17);
  for (const ContourRow& r : rows) {
    out << r.subject_id << ',' << r.slice << ',' << r.frame << ',' << to_string(r.boundary) << ','
        << r.point_index << ',' << r.x << ',' << r.y << '\n';
  }
}

std::vector<ContourRow> read_contour_json(std::istream& in, const std::string& source) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::invalid_input, source + ": " + e.what());
  }
  std::vector<ContourRow> rows;
  try {
    const std::string subject = doc.at("subject_id").get<std::string>();
    for (const auto& p : doc.at("points")) {
      ContourRow row;
      row.subject_id = p.value("subject_id", subject);
      row.slice = p.at("slice").get<std::size_t>();
      row.frame = p.at("frame").get<std::size_t>();
      row.boundary = parse_boundary_label(p.at("boundary").get<std::string>());
      row.point_index = p.at("point_index").get<std::size_t>();
      row.x = p.at("x").get<double>();
      row.y = p.at("y").get<double>();
      rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::invalid_input, source + ": " + e.what());
  } catch (const Error& e) {
    throw e.with_context(source);
  }
  return rows;
}

void write_contour_json(std::ostream& out, const std::vector<ContourRow>& rows) {
  nlohmann::json doc;
  doc["subject_id"] = rows.empty() ? "" : rows.front().subject_id;
  nlohmann::json points = nlohmann::json::array();
  for (const ContourRow& r : rows) {
    points.push_back({{"slice", r.slice},
                      {"frame", r.frame},
                      {"boundary", to_string(r.boundary)},
                      {"point_index", r.point_index},
                      {"x", r.x},
                      {"y", r.y}});
  }
  doc["points"] = std::move(points);
  out << doc.dump(1) << '\n';
}

}  // namespace cardiofem::io
