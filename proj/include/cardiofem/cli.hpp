#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cardiofem/material.hpp"
#include "cardiofem/phantom.hpp"

namespace cardiofem::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;  // tolerance or validation failure
inline constexpr int exit_usage = 2;    // usage or input error

/// Everything a subcommand needs. Unset optionals fall back to a per-command
/// default (for example plane-strain for phantom work, as-printed for studies).
struct RunConfig {
  std::string command;
  std::filesystem::path out_dir = "out";
  std::optional<std::filesystem::path> manifest;
  std::vector<std::filesystem::path> references;

  std::optional<ConstitutiveMode> mode;
  double youngs_modulus = 1e4;
  double poisson_ratio = 0.3;

  std::size_t sectors = 16;
  double tau = 0.5;
  std::size_t n_points = 64;
  std::optional<double> rotation_deg;
  std::uint64_t seed = 42;

  std::optional<std::size_t> n_angular;
  std::optional<std::size_t> n_radial;
  std::size_t levels = 3;

  double pressure = 1.0;
  double inner_radius = 1.0;
  double outer_radius = 2.0;
  bool stiff = false;
  double stiff_start_deg = 247.5;
  double stiff_span_deg = 90.0;
  double stiff_factor = 10.0;
  bool traction = false;
  /// Defaults to clamped when a stiff sector is requested, free otherwise.
  std::optional<OuterWall> outer_wall;

  std::string kind = "healthy";
  std::size_t n_frames = 20;
  std::size_t contour_points = 32;
  std::size_t n_slices = 1;
  double slice_spacing_mm = 8.0;
  bool json_contours = false;
  bool shuffle = false;

  std::size_t slice = 0;
  std::optional<std::size_t> frame;
  bool incremental = false;
  bool edge_average = false;
  bool conjugate_gradient = false;
  bool vtk = true;
  bool dump_matrix = false;
};

/// Applies a JSON object of settings. Keys are the long flag names, with
/// either '-' or '_' as separator; unknown keys are a configuration error.
void apply_json_config(RunConfig& config, const std::string& json_text);
void apply_json_config_file(RunConfig& config, const std::filesystem::path& path);

/// Runs an already assembled configuration and returns the exit code.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses the command line (a --config file is applied first, then explicit
/// flags on top) and executes it.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cardiofem::cli
