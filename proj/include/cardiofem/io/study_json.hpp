#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cardiofem/cardio.hpp"
#include "cardiofem/io/contour_csv.hpp"

namespace cardiofem::io {

/// Study manifest: subject_id, slice_spacing_mm (number or per-slice array),
/// frames_per_cycle and the contour file path relative to the manifest.
struct StudyManifest {
  std::string subject_id;
  std::vector<double> slice_spacing_mm;
  std::size_t frames_per_cycle = 0;
  std::string contours = "contours.csv";
};

StudyManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const StudyManifest& manifest);

/// Groups rows into frames and slices, ordering points by point_index.
/// Rows of other subjects are ignored; the frame count must match the
/// manifest when it is non-zero.
Study build_study(const StudyManifest& manifest, const std::vector<ContourRow>& rows);

/// Reads the manifest and its contour file (.csv or .json).
Study load_study(const std::filesystem::path& manifest_path);

/// Flattens a study into rows. With a seed the row order is shuffled
/// deterministically; point_index still records the polygon order.
std::vector<ContourRow> study_rows(const Study& study,
                                   std::optional<std::uint64_t> shuffle_seed = std::nullopt);

/// Writes manifest.json plus contours.csv (or contours.json) into `dir`.
void save_study(const std::filesystem::path& dir, const Study& study, bool json_contours = false,
                std::optional<std::uint64_t> shuffle_seed = std::nullopt);

}  // namespace cardiofem::io
