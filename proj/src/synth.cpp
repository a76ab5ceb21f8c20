#include "cardiofem/synth.hpp"

#include <array>
#include <numbers>
#include <random>
#include <string>

#include "cardiofem/error.hpp"

namespace cardiofem {

std::string_view to_string(SynthKind kind) noexcept {
  switch (kind) {
    case SynthKind::healthy: return "healthy";
    case SynthKind::mi_wedge: return "mi-wedge";
    case SynthKind::phantom_cycle: return "phantom-cycle";
    case SynthKind::rotation: return "rotation";
  }
  return "healthy";
}

SynthKind parse_synth_kind(std::string_view text) {
  for (SynthKind k : {SynthKind::healthy, SynthKind::mi_wedge, SynthKind::phantom_cycle,
                      SynthKind::rotation}) {
    if (text == to_string(k)) return k;
  }
  throw Error(ErrorKind::configuration, "unknown synthetic study kind '" + std::string(text) + "'");
}

namespace {

// Portable uniform [0, 1): the standard distributions are not specified
// bit-for-bit across library implementations.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Shape {
  std::array<double, 2> amplitude;
  std::array<double, 2> phase;
  double thickness_amp;
  double thickness_phase;

  double inner(double base, double theta) const {
    return base * (1.0 + amplitude[0] * std::cos(2.0 * theta - phase[0]) +
                   amplitude[1] * std::cos(3.0 * theta - phase[1]));
  }
  double thickness(double base, double theta) const {
    return base * (1.0 + thickness_amp * std::cos(theta - thickness_phase));
  }
};

Shape random_shape(std::mt19937_64& rng) {
  Shape s{};
  s.amplitude = {0.02 + 0.04 * unit(rng), 0.01 + 0.02 * unit(rng)};
  s.phase = {two_pi * unit(rng), two_pi * unit(rng)};
  s.thickness_amp = 0.1 * unit(rng);
  s.thickness_phase = two_pi * unit(rng);
  return s;
}

double systolic_profile(std::size_t frame, std::size_t n_frames) {
  const double s = std::sin(std::numbers::pi * static_cast<double>(frame) /
                            static_cast<double>(n_frames));
  return s * s;
}

Point2 polar_point(Point2 c, double r, double theta) {
  return {c.x + r * std::cos(theta), c.y + r * std::sin(theta)};
}

Study cardiac_study(SynthKind kind, const SynthOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::vector<SliceRecord> slices;
  for (std::size_t sl = 0; sl < o.n_slices; ++sl) {
    const Shape shape = random_shape(rng);
    // Apical slices are smaller.
    const double base_r = o.inner_radius * (1.0 - 0.15 * static_cast<double>(sl));
    const double base_t = o.wall_thickness;

    std::vector<double> thetas(o.n_points);
    std::vector<double> r_in(o.n_points);
    std::vector<double> r_out(o.n_points);
    for (std::size_t j = 0; j < o.n_points; ++j) {
      thetas[j] = two_pi * static_cast<double>(j) / static_cast<double>(o.n_points);
      r_in[j] = shape.inner(base_r, thetas[j]);
      r_out[j] = r_in[j] + shape.thickness(base_t, thetas[j]);
    }
    std::vector<Point2> inner0(o.n_points);
    std::vector<Point2> outer0(o.n_points);
    for (std::size_t j = 0; j < o.n_points; ++j) {
      inner0[j] = polar_point(o.center, r_in[j], thetas[j]);
      outer0[j] = polar_point(o.center, r_out[j], thetas[j]);
    }
    const Point2 pivot = centroid(inner0);

    SliceRecord slice;
    slice.slice_spacing_mm = o.slice_spacing_mm;
    for (std::size_t f = 0; f < o.n_frames; ++f) {
      std::vector<Point2> inner(o.n_points);
      std::vector<Point2> outer(o.n_points);
      if (kind == SynthKind::rotation) {
        const double deg = o.n_frames > 1 ? o.rotation_deg_total * static_cast<double>(f) /
                                                static_cast<double>(o.n_frames - 1)
                                          : 0.0;
        for (std::size_t j = 0; j < o.n_points; ++j) {
          inner[j] = rotate_about(inner0[j], pivot, -deg_to_rad(deg));
          outer[j] = rotate_about(outer0[j], pivot, -deg_to_rad(deg));
        }
      } else {
        const double s = systolic_profile(f, o.n_frames);
        for (std::size_t j = 0; j < o.n_points; ++j) {
          const double ri = r_in[j] * (1.0 - o.inner_shortening * s);
          // Myocardial wall area is conserved through the contraction.
          const double ro = std::sqrt(r_out[j] * r_out[j] - r_in[j] * r_in[j] + ri * ri);
          double w = 1.0;
          if (kind == SynthKind::mi_wedge) w = wedge_weight(o, thetas[j]);
          inner[j] = polar_point(o.center, r_in[j] + w * (ri - r_in[j]), thetas[j]);
          outer[j] = polar_point(o.center, r_out[j] + w * (ro - r_out[j]), thetas[j]);
        }
      }
      slice.frames.emplace_back(f, Contour(std::move(inner), BoundaryLabel::inner),
                                Contour(std::move(outer), BoundaryLabel::outer));
    }
    slices.push_back(std::move(slice));
  }
  std::string id = std::string(to_string(kind)) + "-" + std::to_string(o.seed);
  return Study(std::move(id), std::move(slices));
}

}  // namespace

double wedge_weight(const SynthOptions& o, double angle_rad) {
  const double span = o.wedge_span_deg;
  const double offset = rad_to_deg(wrap_angle(angle_rad - deg_to_rad(o.wedge_start_deg)));
  if (offset < span) return o.wedge_residual;
  // Distance in degrees outside the wedge, on whichever side is nearer.
  const double outside = std::min(offset - span, 360.0 - offset);
  if (o.wedge_taper_deg <= 0.0 || outside >= o.wedge_taper_deg) return 1.0;
  const double t = outside / o.wedge_taper_deg;
  const double ramp = 0.5 - 0.5 * std::cos(std::numbers::pi * t);
  return o.wedge_residual + (1.0 - o.wedge_residual) * ramp;
}

Study make_synthetic_study(SynthKind kind, const SynthOptions& options) {
  if (options.n_frames < 2 || options.n_points < 3 || options.n_slices < 1) {
    throw Error(ErrorKind::configuration,
                "synthetic study needs >= 2 frames, >= 3 points and >= 1 slice");
  }
  if (kind == SynthKind::phantom_cycle) {
    RingSpec spec = options.phantom;
    if (spec.pressures.size() + 1 != options.n_frames) {
      spec.pressures = linear_pressure_ramp(spec.peak_pressure(), options.n_frames - 1);
    }
    LoadCycleOptions cycle;
    cycle.contour_points = options.n_points;
    SliceRecord slice;
    slice.slice_spacing_mm = options.slice_spacing_mm;
    slice.frames = pressure_load_cycle(spec, cycle);
    std::vector<SliceRecord> slices(options.n_slices, slice);
    return Study("phantom-cycle-" + std::to_string(options.seed), std::move(slices));
  }
  return cardiac_study(kind, options);
}

}  // namespace cardiofem
