#pragma once

#include <cstdint>
#include <string_view>

#include "cardiofem/cardio.hpp"
#include "cardiofem/phantom.hpp"

namespace cardiofem {

enum class SynthKind { healthy, mi_wedge, phantom_cycle, rotation };

std::string_view to_string(SynthKind kind) noexcept;
SynthKind parse_synth_kind(std::string_view text);

struct SynthOptions {
  std::uint64_t seed = 42;
  std::size_t n_frames = 20;
  std::size_t n_points = 32;
  std::size_t n_slices = 1;
  double slice_spacing_mm = 8.0;
  Point2 center{128.0, 128.0};
  double inner_radius = 20.0;  // pixels
  double wall_thickness = 10.0;
  /// Peak fractional shortening of the inner radius.
  double inner_shortening = 0.45;
  /// Inert wedge of the mi_wedge kind, counter-clockwise from start.
  double wedge_start_deg = 247.5;
  double wedge_span_deg = 90.0;
  /// Fraction of the healthy displacement kept inside the wedge.
  double wedge_residual = 0.05;
  /// Width of the cosine ramp back to full motion, outside the wedge.
  double wedge_taper_deg = 22.5;
  /// Total clockwise rotation reached at the last frame (rotation kind).
  double rotation_deg_total = 7.0;
  RingSpec phantom{};
};

/// Deterministic synthetic study. Healthy frames contract radially along a
/// sin^2 systolic profile with wall area conserved; mi_wedge scales the motion
/// inside the wedge down to wedge_residual; rotation rigidly rotates frame 0
/// clockwise along a linear ramp; phantom_cycle is the analytic pressurized
/// ring load cycle.
Study make_synthetic_study(SynthKind kind, const SynthOptions& options = {});

/// Radial weight applied to the healthy displacement by the mi_wedge kind.
double wedge_weight(const SynthOptions& options, double angle_rad);

}  // namespace cardiofem
