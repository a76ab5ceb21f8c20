#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cardiofem/contour.hpp"
#include "cardiofem/fem.hpp"
#include "cardiofem/material.hpp"
#include "cardiofem/mesh.hpp"
#include "cardiofem/strain.hpp"

namespace cardiofem {

struct SliceRecord {
  double slice_spacing_mm = 1.0;
  std::vector<FrameContours> frames;  // frame 0 = begin systole
};

/// A subject's contour series. Every slice carries the same number of frames,
/// indexed contiguously from 0.
class Study {
 public:
  Study(std::string subject_id, std::vector<SliceRecord> slices);

  const std::string& subject_id() const noexcept { return subject_id_; }
  const std::vector<SliceRecord>& slices() const noexcept { return slices_; }
  std::size_t frame_count() const noexcept { return slices_.front().frames.size(); }
  std::size_t slice_count() const noexcept { return slices_.size(); }

 private:
  std::string subject_id_;
  std::vector<SliceRecord> slices_;
};

/// Slab sum over slices of |shoelace area of the inner contour| * spacing.
double ventricle_volume(const Study& study, std::size_t frame);

struct VolumeCurve {
  std::vector<double> raw;
  std::vector<double> normalized;  // raw / raw[0]

  double min_normalized() const;
  /// min(raw) / max(raw), the "fraction of maximum volume" reading.
  double min_over_max() const;
};

VolumeCurve normalized_volume_curve(const Study& study);

enum class DeformationReference { cumulative, incremental };

struct CycleParams {
  std::size_t n_points = 64;  // also the mesh angular resolution
  std::size_t n_radial = 8;
  double rotation_deg_total = 0.0;
  Material base{};
  std::vector<AngularRegion> regions;
  ConstitutiveMode mode = ConstitutiveMode::as_printed;
  DirichletMode dirichlet_mode = DirichletMode::nodal;
  std::size_t n_sectors = 16;
  DeformationReference reference = DeformationReference::cumulative;
  double min_angle_deg = default_min_angle_deg;
  SolverOptions solver{};
};

/// Rotation compensation for the frame pair ending at `frame`: a linear ramp
/// reaching rotation_deg_total at the last frame. Incremental mode uses one
/// ramp step per pair.
double rotation_for_frame(const CycleParams& params, std::size_t frame, std::size_t frame_count);

struct FrameResult {
  std::size_t frame_index;
  BoundaryDisplacements boundary;
  DisplacementField displacement;
  StrainField strain;
  SectorSummary sectors;
};

struct SliceAnalysis {
  std::size_t slice_index;
  Point2 center;
  Mesh mesh;  // frame-0 geometry, shared by every frame pair
  MaterialField materials;
  ValidationReport mesh_report;
  std::vector<FrameResult> frames;

  std::vector<SectorSummary> sector_series() const;
};

/// Runs boundary correspondence, Dirichlet FEM solve, strain and sector
/// averaging for every frame of one slice. Frame 0 compares with itself and is
/// all zeros in cumulative mode. Errors carry the slice and frame index.
SliceAnalysis analyze_slice(const Study& study, std::size_t slice, const CycleParams& params);

std::vector<SliceAnalysis> cycle_strain_analysis(const Study& study, const CycleParams& params);

enum class SectorFlag { normal, suspected_infarct };

struct LocalizationResult {
  double tau = 0.5;
  std::vector<SectorFlag> flags;
  std::vector<std::vector<double>> subject_series;    // [sector][frame]
  std::vector<std::vector<double>> reference_series;  // [sector][frame]
  std::vector<double> subject_time_mean;
  std::vector<double> reference_time_mean;

  std::vector<std::size_t> flagged_sectors() const;
};

/// Per-sector per-frame arithmetic mean over several reference subjects.
std::vector<SectorSummary> aggregate_reference(
    const std::vector<std::vector<SectorSummary>>& references);

/// Flags a sector when its time-averaged mean effective strain is below
/// tau times the reference's for the same sector.
LocalizationResult infarct_localization(const std::vector<SectorSummary>& subject,
                                        const std::vector<SectorSummary>& reference,
                                        double tau = 0.5);

}  // namespace cardiofem
