#include "cardiofem/cardio.hpp"

#include <algorithm>
#include <numeric>

#include "cardiofem/error.hpp"

namespace cardiofem {

Study::Study(std::string subject_id, std::vector<SliceRecord> slices)
    : subject_id_(std::move(subject_id)), slices_(std::move(slices)) {
  if (slices_.empty()) throw Error(ErrorKind::invalid_input, "study has no slices");
  const std::size_t frames = slices_.front().frames.size();
  for (std::size_t s = 0; s < slices_.size(); ++s) {
    const SliceRecord& slice = slices_[s];
    const std::string where = "slice " + std::to_string(s);
    if (!(slice.slice_spacing_mm > 0.0) || !std::isfinite(slice.slice_spacing_mm)) {
      throw Error(ErrorKind::invalid_input, where + ": slice spacing must be positive");
    }
    if (slice.frames.size() != frames || frames == 0) {
      throw Error(ErrorKind::invalid_input, where + ": inconsistent frame count");
    }
    for (std::size_t f = 0; f < slice.frames.size(); ++f) {
      if (slice.frames[f].frame_index() != f) {
        throw Error(ErrorKind::invalid_input,
                    where + ": frame indices must be contiguous from 0");
      }
    }
  }
}

double ventricle_volume(const Study& study, std::size_t frame) {
  if (frame >= study.frame_count()) {
    throw Error(ErrorKind::invalid_input, "frame " + std::to_string(frame) + " out of range");
  }
  double volume = 0.0;
  for (std::size_t s = 0; s < study.slice_count(); ++s) {
    const SliceRecord& slice = study.slices()[s];
    const Contour& inner = slice.frames[frame].inner();
    try {
      validate_simple(inner);
    } catch (const Error& e) {
      throw e.with_context("slice " + std::to_string(s) + ", frame " + std::to_string(frame));
    }
    volume += std::abs(signed_area(inner.points())) * slice.slice_spacing_mm;
  }
  return volume;
}

double VolumeCurve::min_normalized() const {
  return *std::min_element(normalized.begin(), normalized.end());
}

double VolumeCurve::min_over_max() const {
  return *std::min_element(raw.begin(), raw.end()) / *std::max_element(raw.begin(), raw.end());
}

VolumeCurve normalized_volume_curve(const Study& study) {
  if (study.frame_count() < 2) {
    throw Error(ErrorKind::invalid_input, "a volume curve needs at least two frames");
  }
  VolumeCurve curve;
  for (std::size_t f = 0; f < study.frame_count(); ++f) curve.raw.push_back(ventricle_volume(study, f));
  if (!(curve.raw[0] > 0.0)) {
    throw Error(ErrorKind::degenerate, "initial ventricle volume is zero");
  }
  for (double v : curve.raw) curve.normalized.push_back(v / curve.raw[0]);
  curve.normalized[0] = 1.0;
  return curve;
}

double rotation_for_frame(const CycleParams& params, std::size_t frame, std::size_t frame_count) {
  if (frame_count < 2) return 0.0;
  const double step = params.rotation_deg_total / static_cast<double>(frame_count - 1);
  if (params.reference == DeformationReference::incremental) return frame == 0 ? 0.0 : step;
  return step * static_cast<double>(frame);
}

std::vector<SectorSummary> SliceAnalysis::sector_series() const {
  std::vector<SectorSummary> out;
  out.reserve(frames.size());
  for (const FrameResult& f : frames) out.push_back(f.sectors);
  return out;
}

SliceAnalysis analyze_slice(const Study& study, std::size_t slice, const CycleParams& params) {
  if (slice >= study.slice_count()) {
    throw Error(ErrorKind::invalid_input, "slice " + std::to_string(slice) + " out of range");
  }
  if (params.n_sectors < 1) throw Error(ErrorKind::configuration, "need at least one sector");
  const std::vector<FrameContours>& frames = study.slices()[slice].frames;
  const std::string slice_ctx = "slice " + std::to_string(slice);

  SliceAnalysis analysis;
  analysis.slice_index = slice;
  analysis.center = centroid(frames.front().inner());
  try {
    const BoundaryDisplacements rest =
        boundary_displacements(frames.front(), frames.front(), params.n_points, 0.0);
    std::vector<Point2> inner_nodes;
    std::vector<Point2> outer_nodes;
    for (const BoundaryVector& v : rest.inner_vectors) inner_nodes.push_back(v.position);
    for (const BoundaryVector& v : rest.outer_vectors) outer_nodes.push_back(v.position);
    analysis.mesh = triangulate_annulus(Contour(inner_nodes, BoundaryLabel::inner),
                                        Contour(outer_nodes, BoundaryLabel::outer),
                                        params.n_points, params.n_radial);
    analysis.mesh_report = validate(analysis.mesh, params.min_angle_deg);
    analysis.materials =
        region_material_field(analysis.mesh, params.base, params.regions, analysis.center);
  } catch (const Error& e) {
    throw e.with_context(slice_ctx + ", frame 0");
  }

  // Assembled once; only the constrained values change between frames.
  const LinearSystem assembled = assemble(analysis.mesh, analysis.materials, params.mode);

  for (std::size_t f = 0; f < frames.size(); ++f) {
    try {
      const FrameContours& from =
          params.reference == DeformationReference::cumulative || f == 0 ? frames.front()
                                                                         : frames[f - 1];
      FrameResult result;
      result.frame_index = f;
      result.boundary = boundary_displacements(from, frames[f], params.n_points,
                                               rotation_for_frame(params, f, frames.size()),
                                               analysis.center);
      std::vector<Vec2> inner_u;
      std::vector<Vec2> outer_u;
      for (const BoundaryVector& v : result.boundary.inner_vectors) inner_u.push_back(v.displacement);
      for (const BoundaryVector& v : result.boundary.outer_vectors) outer_u.push_back(v.displacement);
      const BoundaryConditionSet bcs =
          dirichlet_from_boundary(analysis.mesh, inner_u, outer_u, params.dirichlet_mode);
      result.displacement = solve(apply_dirichlet(assembled, bcs), params.solver);
      result.strain = strain_field(analysis.mesh, result.displacement, analysis.materials);
      result.sectors = sector_average(analysis.mesh, result.strain, result.displacement,
                                      analysis.center, params.n_sectors);
      analysis.frames.push_back(std::move(result));
    } catch (const Error& e) {
      throw e.with_context(slice_ctx + ", frame " + std::to_string(f));
    }
  }
  return analysis;
}

std::vector<SliceAnalysis> cycle_strain_analysis(const Study& study, const CycleParams& params) {
  std::vector<SliceAnalysis> out;
  out.reserve(study.slice_count());
  for (std::size_t s = 0; s < study.slice_count(); ++s) out.push_back(analyze_slice(study, s, params));
  return out;
}

std::vector<std::size_t> LocalizationResult::flagged_sectors() const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < flags.size(); ++s) {
    if (flags[s] == SectorFlag::suspected_infarct) out.push_back(s);
  }
  return out;
}

std::vector<SectorSummary> aggregate_reference(
    const std::vector<std::vector<SectorSummary>>& references) {
  if (references.empty()) throw Error(ErrorKind::configuration, "no reference subjects given");
  const std::size_t frames = references.front().size();
  const std::size_t sectors = frames ? references.front().front().n_sectors : 0;
  for (const auto& ref : references) {
    if (ref.size() != frames) {
      throw Error(ErrorKind::configuration, "reference subjects differ in frame count");
    }
    for (const SectorSummary& s : ref) {
      if (s.n_sectors != sectors) {
        throw Error(ErrorKind::configuration, "reference subjects differ in sector count");
      }
    }
  }
  const auto n = static_cast<double>(references.size());
  std::vector<SectorSummary> mean(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    SectorSummary& m = mean[f];
    m.n_sectors = sectors;
    m.sectors.assign(sectors, {});
    for (const auto& ref : references) {
      const SectorSummary& src = ref[f];
      for (std::size_t s = 0; s < sectors; ++s) {
        m.sectors[s].mean_displacement += src.sectors[s].mean_displacement / n;
        m.sectors[s].mean_effective += src.sectors[s].mean_effective / n;
        m.sectors[s].max_effective += src.sectors[s].max_effective / n;
        m.sectors[s].count = src.sectors[s].count;
      }
      m.global_mean_displacement += src.global_mean_displacement / n;
      m.global_mean_effective += src.global_mean_effective / n;
      m.global_max_effective += src.global_max_effective / n;
    }
  }
  return mean;
}

LocalizationResult infarct_localization(const std::vector<SectorSummary>& subject,
                                        const std::vector<SectorSummary>& reference, double tau) {
  if (!std::isfinite(tau) || tau < 0.0) {
    throw Error(ErrorKind::configuration, "tau must be a finite non-negative fraction");
  }
  if (subject.empty() || subject.size() != reference.size()) {
    throw Error(ErrorKind::configuration, "subject and reference must have the same frame count");
  }
  const std::size_t sectors = subject.front().n_sectors;
  for (std::size_t f = 0; f < subject.size(); ++f) {
    if (subject[f].n_sectors != sectors || reference[f].n_sectors != sectors ||
        subject[f].sectors.size() != sectors || reference[f].sectors.size() != sectors) {
      throw Error(ErrorKind::configuration,
                  "subject and reference sector counts differ at frame " + std::to_string(f));
    }
  }

  LocalizationResult result;
  result.tau = tau;
  result.subject_series.assign(sectors, std::vector<double>(subject.size()));
  result.reference_series.assign(sectors, std::vector<double>(subject.size()));
  for (std::size_t s = 0; s < sectors; ++s) {
    for (std::size_t f = 0; f < subject.size(); ++f) {
      result.subject_series[s][f] = subject[f].sectors[s].mean_effective;
      result.reference_series[s][f] = reference[f].sectors[s].mean_effective;
    }
    const auto mean = [](const std::vector<double>& v) {
      return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    result.subject_time_mean.push_back(mean(result.subject_series[s]));
    result.reference_time_mean.push_back(mean(result.reference_series[s]));
    result.flags.push_back(result.subject_time_mean[s] < tau * result.reference_time_mean[s]
                               ? SectorFlag::suspected_infarct
                               : SectorFlag::normal);
  }
  return result;
}

}  // namespace cardiofem
