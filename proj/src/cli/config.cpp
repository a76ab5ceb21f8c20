#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cardiofem/cli.hpp"
#include "cardiofem/error.hpp"

namespace cardiofem::cli {

namespace {

using nlohmann::json;
using JsonSetter = std::function<void(RunConfig&, const json&)>;

template <class T>
JsonSetter set(T RunConfig::*member) {
  return [member](RunConfig& c, const json& v) { c.*member = v.get<T>(); };
}

template <class T>
JsonSetter set_optional(std::optional<T> RunConfig::*member) {
  return [member](RunConfig& c, const json& v) { c.*member = v.get<T>(); };
}

const std::map<std::string, JsonSetter>& json_setters() {
  static const std::map<std::string, JsonSetter> setters = {
      {"command", [](RunConfig& c, const json& v) {
         const auto name = v.get<std::string>();
         if (!c.command.empty() && name != c.command) {
           throw Error(ErrorKind::configuration,
                       "config is for '" + name + "' but '" + c.command + "' was requested");
         }
       }},
      {"out", [](RunConfig& c, const json& v) { c.out_dir = v.get<std::string>(); }},
      {"manifest", [](RunConfig& c, const json& v) { c.manifest = v.get<std::string>(); }},
      {"reference",
       [](RunConfig& c, const json& v) {
         c.references.clear();
         if (v.is_array()) {
           for (const auto& p : v) c.references.emplace_back(p.get<std::string>());
         } else {
           c.references.emplace_back(v.get<std::string>());
         }
       }},
      {"mode",
       [](RunConfig& c, const json& v) { c.mode = parse_constitutive_mode(v.get<std::string>()); }},
      {"youngs_modulus", set(&RunConfig::youngs_modulus)},
      {"poisson_ratio", set(&RunConfig::poisson_ratio)},
      {"sectors", set(&RunConfig::sectors)},
      {"tau", set(&RunConfig::tau)},
      {"n_points", set(&RunConfig::n_points)},
      {"rotation_deg", set_optional(&RunConfig::rotation_deg)},
      {"seed", set(&RunConfig::seed)},
      {"n_angular", set_optional(&RunConfig::n_angular)},
      {"n_radial", set_optional(&RunConfig::n_radial)},
      {"levels", set(&RunConfig::levels)},
      {"pressure", set(&RunConfig::pressure)},
      {"inner_radius", set(&RunConfig::inner_radius)},
      {"outer_radius", set(&RunConfig::outer_radius)},
      {"stiff", set(&RunConfig::stiff)},
      {"stiff_start_deg", set(&RunConfig::stiff_start_deg)},
      {"stiff_span_deg", set(&RunConfig::stiff_span_deg)},
      {"stiff_factor", set(&RunConfig::stiff_factor)},
      {"traction", set(&RunConfig::traction)},
      {"outer_wall",
       [](RunConfig& c, const json& v) { c.outer_wall = parse_outer_wall(v.get<std::string>()); }},
      {"kind", set(&RunConfig::kind)},
      {"n_frames", set(&RunConfig::n_frames)},
      {"contour_points", set(&RunConfig::contour_points)},
      {"n_slices", set(&RunConfig::n_slices)},
      {"slice_spacing_mm", set(&RunConfig::slice_spacing_mm)},
      {"json_contours", set(&RunConfig::json_contours)},
      {"shuffle", set(&RunConfig::shuffle)},
      {"slice", set(&RunConfig::slice)},
      {"frame", set_optional(&RunConfig::frame)},
      {"incremental", set(&RunConfig::incremental)},
      {"edge_average", set(&RunConfig::edge_average)},
      {"cg", set(&RunConfig::conjugate_gradient)},
      {"vtk", set(&RunConfig::vtk)},
      {"dump_matrix", set(&RunConfig::dump_matrix)},
  };
  return setters;
}

std::string normalize_key(std::string key) {
  for (char& ch : key) {
    if (ch == '-') ch = '_';
  }
  return key;
}

/// Keeps each flag's parsed value next to a setter that copies it into the
/// config only when the flag was given, so flags override the config file.
class FlagBinder {
 public:
  explicit FlagBinder(CLI::App& app) : app_(app) {}

  template <class T>
  CLI::Option* option(const std::string& name, const std::string& help,
                      std::function<void(RunConfig&, const T&)> apply) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app_.add_option(name, *value, help);
    appliers_.push_back([opt, value, apply](RunConfig& c) {
      if (opt->count() > 0) apply(c, *value);
    });
    return opt;
  }

  template <class T>
  CLI::Option* option(const std::string& name, const std::string& help, T RunConfig::*member) {
    return option<T>(name, help, [member](RunConfig& c, const T& v) { c.*member = v; });
  }

  template <class T>
  CLI::Option* option(const std::string& name, const std::string& help,
                      std::optional<T> RunConfig::*member) {
    return option<T>(name, help, [member](RunConfig& c, const T& v) { c.*member = v; });
  }

  CLI::Option* flag(const std::string& name, const std::string& help, bool RunConfig::*member,
                    bool value = true) {
    CLI::Option* opt = app_.add_flag(name, help);
    appliers_.push_back([opt, member, value](RunConfig& c) {
      if (opt->count() > 0) c.*member = value;
    });
    return opt;
  }

  void apply(RunConfig& config) const {
    for (const auto& a : appliers_) a(config);
  }

 private:
  CLI::App& app_;
  std::vector<std::function<void(RunConfig&)>> appliers_;
};

}  // namespace

void apply_json_config(RunConfig& config, const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::configuration, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::configuration, "config must be a JSON object");
  const auto& setters = json_setters();
  for (const auto& [raw_key, value] : doc.items()) {
    const std::string key = normalize_key(raw_key);
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw Error(ErrorKind::configuration, "unknown config key '" + raw_key + "'");
    }
    try {
      it->second(config, value);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::configuration, "config key '" + raw_key + "': " + e.what());
    }
  }
}

void apply_json_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    apply_json_config(config, text.str());
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cardiac wall deformation and strain from contour sequences"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"phantom-verify", "Check the solver against the pressurized ring closed form"},
      {"analyze", "Volume curve, strain maps and sector series for a study"},
      {"synth", "Write a deterministic synthetic study"},
      {"mesh", "Mesh one frame of a study, or the phantom ring"},
      {"solve", "Displacement field for one frame, or the phantom ring"},
      {"strain", "Strain and sector tables for one frame, or the phantom ring"},
      {"volume", "Normalized ventricle volume curve"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "JSON settings file; flags override it");

  FlagBinder flags(app);
  flags.option<std::string>("--out", "Output directory",
                            [](RunConfig& c, const std::string& v) { c.out_dir = v; });
  flags.option<std::string>("--manifest", "Study manifest JSON",
                            [](RunConfig& c, const std::string& v) { c.manifest = v; });
  flags.option<std::vector<std::string>>(
      "--reference", "Reference (normal) study manifests, repeatable",
      [](RunConfig& c, const std::vector<std::string>& v) {
        c.references.assign(v.begin(), v.end());
      });
  flags.option<std::string>("--mode", "Constitutive matrix: as-printed or plane-strain",
                            [](RunConfig& c, const std::string& v) {
                              c.mode = parse_constitutive_mode(v);
                            });
  flags.option("--youngs-modulus", "Young's modulus", &RunConfig::youngs_modulus);
  flags.option("--poisson-ratio", "Poisson's ratio", &RunConfig::poisson_ratio);
  flags.option("--sectors", "Number of angular sectors (default 16)", &RunConfig::sectors);
  flags.option("--tau", "Localization threshold fraction (default 0.5)", &RunConfig::tau);
  flags.option("--n-points", "Contour resampling count (default 64)", &RunConfig::n_points);
  flags.option("--rotation-deg", "Total clockwise wall rotation to compensate",
               &RunConfig::rotation_deg);
  flags.option("--seed", "Seed for synthetic data", &RunConfig::seed);
  flags.option("--n-angular", "Angular mesh resolution", &RunConfig::n_angular);
  flags.option("--n-radial", "Radial mesh resolution", &RunConfig::n_radial);
  flags.option("--levels", "Refinement levels for phantom-verify", &RunConfig::levels);
  flags.option("--pressure", "Phantom internal pressure", &RunConfig::pressure);
  flags.option("--inner-radius", "Phantom inner radius", &RunConfig::inner_radius);
  flags.option("--outer-radius", "Phantom outer radius", &RunConfig::outer_radius);
  flags.flag("--stiff", "Add a stiff sector to the phantom", &RunConfig::stiff);
  flags.option("--stiff-start-deg", "Start angle of the stiff sector", &RunConfig::stiff_start_deg);
  flags.option("--stiff-span-deg", "Angular span of the stiff sector", &RunConfig::stiff_span_deg);
  flags.option("--stiff-factor", "Modulus multiplier in the stiff sector",
               &RunConfig::stiff_factor);
  flags.option<std::string>("--outer-wall", "Phantom outer wall support: free or clamped",
                            [](RunConfig& c, const std::string& v) {
                              c.outer_wall = parse_outer_wall(v);
                            });
  flags.flag("--traction", "Solve the phantom with pressure tractions", &RunConfig::traction);
  flags.option("--kind", "Synthetic study kind: healthy, mi-wedge, phantom-cycle, rotation",
               &RunConfig::kind);
  flags.option("--n-frames", "Frames per cycle for synthetic data", &RunConfig::n_frames);
  flags.option("--contour-points", "Points per synthetic contour", &RunConfig::contour_points);
  flags.option("--n-slices", "Slices in a synthetic study", &RunConfig::n_slices);
  flags.option("--slice-spacing", "Slice spacing of a synthetic study in mm",
               &RunConfig::slice_spacing_mm);
  flags.flag("--json-contours", "Write contours as JSON instead of CSV",
             &RunConfig::json_contours);
  flags.flag("--shuffle", "Shuffle contour rows with the seed", &RunConfig::shuffle);
  flags.option("--slice", "Slice index", &RunConfig::slice);
  flags.option("--frame", "Frame index (default: last frame)", &RunConfig::frame);
  flags.flag("--incremental", "Frame-to-frame instead of cumulative deformation",
             &RunConfig::incremental);
  flags.flag("--edge-average", "Average Dirichlet data over boundary edges",
             &RunConfig::edge_average);
  flags.flag("--cg", "Use the conjugate gradient solver", &RunConfig::conjugate_gradient);
  flags.flag("--no-vtk", "Skip per-frame VTK output", &RunConfig::vtk, false);
  flags.flag("--dump-matrix", "Write the stiffness matrix in Matrix Market format",
             &RunConfig::dump_matrix);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
  }

  RunConfig config;
  for (const auto& [name, help] : commands) {
    if (app.got_subcommand(name)) config.command = name;
  }
  try {
    if (!config_path.empty()) apply_json_config_file(config, config_path);
    flags.apply(config);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return execute(config, out, err);
}

}  // namespace cardiofem::cli
