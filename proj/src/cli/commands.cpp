#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cardiofem/cardio.hpp"
#include "cardiofem/cli.hpp"
#include "cardiofem/error.hpp"
#include "cardiofem/io/study_json.hpp"
#include "cardiofem/io/tables.hpp"
#include "cardiofem/io/vtk.hpp"
#include "cardiofem/phantom.hpp"
#include "cardiofem/synth.hpp"

namespace cardiofem::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Check {
  std::string name;
  double value;
  double limit;
  bool at_most;  // value <= limit, otherwise value >= limit
  std::string detail;

  bool passed() const { return at_most ? value <= limit : value >= limit; }
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void print_check(std::ostream& out, const Check& c) {
  out << (c.passed() ? "PASS " : "FAIL ") << c.name << ' ' << format_number(c.value)
      << (c.at_most ? " <= " : " >= ") << format_number(c.limit);
  if (!c.detail.empty()) out << " (" << c.detail << ')';
  out << '\n';
}

json check_json(const Check& c) {
  return {{"name", c.name},
          {"value", c.value},
          {"limit", c.limit},
          {"comparison", c.at_most ? "<=" : ">="},
          {"passed", c.passed()},
          {"detail", c.detail}};
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out = io::open_output(path);
  out << doc.dump(2) << '\n';
}

Material base_material(const RunConfig& c) { return {c.youngs_modulus, c.poisson_ratio}; }

RingSpec ring_spec(const RunConfig& c) {
  RingSpec spec;
  spec.inner_radius = c.inner_radius;
  spec.outer_radius = c.outer_radius;
  spec.base = base_material(c);
  spec.pressures = {c.pressure};
  spec.mode = c.mode.value_or(ConstitutiveMode::plane_strain);
  spec.outer_wall = c.outer_wall.value_or(c.stiff ? OuterWall::clamped : OuterWall::free);
  if (c.stiff) {
    spec.stiff_regions.push_back({c.stiff_start_deg, c.stiff_start_deg + c.stiff_span_deg,
                                  {c.youngs_modulus * c.stiff_factor, c.poisson_ratio}});
  }
  validate(spec);
  return spec;
}

CycleParams cycle_params(const RunConfig& c) {
  CycleParams p;
  p.n_points = c.n_points;
  p.n_radial = c.n_radial.value_or(8);
  p.rotation_deg_total = c.rotation_deg.value_or(0.0);
  p.base = base_material(c);
  p.mode = c.mode.value_or(ConstitutiveMode::as_printed);
  p.dirichlet_mode = c.edge_average ? DirichletMode::edge_average : DirichletMode::nodal;
  p.n_sectors = c.sectors;
  p.reference = c.incremental ? DeformationReference::incremental : DeformationReference::cumulative;
  p.solver.kind = c.conjugate_gradient ? SolverKind::conjugate_gradient : SolverKind::direct;
  return p;
}

Study load_manifest(const RunConfig& c) {
  if (!c.manifest) throw Error(ErrorKind::invalid_input, "--manifest is required");
  if (!fs::exists(*c.manifest)) {
    throw Error(ErrorKind::invalid_input, "manifest not found: " + c.manifest->string());
  }
  return io::load_study(*c.manifest);
}

std::vector<io::CellScalars> strain_cells(const StrainField& s) {
  io::CellScalars ex{"eps_x", {}}, ey{"eps_y", {}}, g{"gamma_xy", {}};
  for (const Strain& e : s.strains) {
    ex.values.push_back(e.eps_x);
    ey.values.push_back(e.eps_y);
    g.values.push_back(e.gamma_xy);
  }
  return {{"effective_strain", s.effective}, ex, ey, g};
}

json sector_json(const SectorSummary& s) {
  json rows = json::array();
  for (std::size_t i = 0; i < s.n_sectors; ++i) {
    rows.push_back({{"sector", i},
                    {"mean_displacement", s.sectors[i].mean_displacement},
                    {"mean_effective", s.sectors[i].mean_effective},
                    {"max_effective", s.sectors[i].max_effective},
                    {"count", s.sectors[i].count}});
  }
  return rows;
}

/// Per-frame sector series averaged over slices.
std::vector<SectorSummary> study_series(const std::vector<SliceAnalysis>& analyses) {
  std::vector<std::vector<SectorSummary>> per_slice;
  for (const SliceAnalysis& a : analyses) per_slice.push_back(a.sector_series());
  return aggregate_reference(per_slice);
}

std::vector<std::size_t> sectors_in_regions(const std::vector<AngularRegion>& regions,
                                            std::size_t n_sectors) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < n_sectors; ++s) {
    const double mid = two_pi * (static_cast<double>(s) + 0.5) / static_cast<double>(n_sectors);
    if (std::any_of(regions.begin(), regions.end(),
                    [&](const AngularRegion& r) { return r.contains(mid); })) {
      out.push_back(s);
    }
  }
  return out;
}

int cmd_phantom_verify(const RunConfig& c, std::ostream& out) {
  const RingSpec spec = ring_spec(c);
  RingSpec homogeneous = spec;
  homogeneous.stiff_regions.clear();
  homogeneous.outer_wall = OuterWall::free;
  const double p = c.pressure;
  const std::size_t na = c.n_angular.value_or(32);
  const std::size_t nr = c.n_radial.value_or(4);
  const std::size_t levels = std::max<std::size_t>(c.levels, 1);
  const std::size_t target = levels >= 2 ? 1 : 0;
  const std::size_t scale_target = std::size_t{1} << target;
  const std::size_t scale_finest = std::size_t{1} << (levels - 1);

  prepare_out_dir(c.out_dir);
  std::vector<Check> checks;

  const auto rows = lame_convergence(homogeneous, p, na, nr, levels);
  {
    std::ofstream f = io::open_output(c.out_dir / "convergence.csv");
    io::write_convergence_csv(f, rows);
  }
  checks.push_back({"dirichlet_l2", rows[target].l2_error, 0.01, true,
                    std::to_string(rows[target].n_angular) + "x" +
                        std::to_string(rows[target].n_radial)});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    checks.push_back({"order", rows[i].order, 1.7, false,
                      std::to_string(rows[i - 1].n_angular) + "x" +
                          std::to_string(rows[i - 1].n_radial) + " -> " +
                          std::to_string(rows[i].n_angular) + "x" +
                          std::to_string(rows[i].n_radial)});
  }

  const RingModel fine = make_ring(homogeneous, na * scale_finest, nr * scale_finest);
  const DisplacementField traction = traction_solve(homogeneous, fine, p);
  checks.push_back({"traction_l2", relative_l2_error(fine.mesh, traction, homogeneous, p), 0.02,
                    true,
                    std::to_string(na * scale_finest) + "x" + std::to_string(nr * scale_finest)});

  // Sector table of the (possibly inhomogeneous) ring under pressure tractions.
  const RingModel ring = make_ring(spec, na * scale_target, nr * scale_target);
  const DisplacementField field = traction_solve(spec, ring, p);
  const StrainField strain = strain_field(ring.mesh, field, ring.materials);
  const SectorSummary sectors = sector_average(ring.mesh, strain, field, spec.center, c.sectors);
  // Homogeneous free-wall closed form per sector, for side-by-side comparison.
  const bool with_lame = spec.outer_wall == OuterWall::free;
  std::vector<double> lame_mean(c.sectors, 0.0);
  for (std::size_t t = 0; with_lame && t < ring.mesh.triangle_count(); ++t) {
    const Point2 g = triangle_centroid(ring.mesh, t);
    const std::size_t s = sector_of(polar_angle(g, spec.center), c.sectors);
    lame_mean[s] += norm(lame_field(homogeneous, p, g));
  }
  {
    std::ofstream f = io::open_output(c.out_dir / "sectors.csv");
    f << "sector,mean_disp,mean_effective,count" << (with_lame ? ",lame_mean_disp" : "") << '\n';
    for (std::size_t s = 0; s < c.sectors; ++s) {
      const SectorStats& st = sectors.sectors[s];
      f << s << ',' << st.mean_displacement << ',' << st.mean_effective << ',' << st.count;
      if (with_lame) f << ',' << (st.count ? lame_mean[s] / static_cast<double>(st.count) : 0.0);
      f << '\n';
    }
  }

  std::vector<std::size_t> stiff_sectors;
  if (!spec.homogeneous()) {
    stiff_sectors = sectors_in_regions(spec.stiff_regions, c.sectors);
    double stiff_disp = 0.0, stiff_eff = 0.0;
    double normal_disp = INFINITY, normal_eff = INFINITY;
    for (std::size_t s = 0; s < c.sectors; ++s) {
      const SectorStats& st = sectors.sectors[s];
      if (std::find(stiff_sectors.begin(), stiff_sectors.end(), s) != stiff_sectors.end()) {
        stiff_disp = std::max(stiff_disp, st.mean_displacement);
        stiff_eff = std::max(stiff_eff, st.mean_effective);
      } else {
        normal_disp = std::min(normal_disp, st.mean_displacement);
        normal_eff = std::min(normal_eff, st.mean_effective);
      }
    }
    // Strict minima: the largest stiff value must stay below the smallest normal one.
    const double eps = std::nextafter(1.0, 0.0);
    checks.push_back({"stiff_displacement_ratio", stiff_disp / normal_disp, eps, true,
                      "max stiff / min normal sector"});
    checks.push_back({"stiff_effective_ratio", stiff_eff / normal_eff, eps, true,
                      "max stiff / min normal sector"});
  }

  bool all = true;
  json report_checks = json::array();
  for (const Check& ch : checks) {
    print_check(out, ch);
    report_checks.push_back(check_json(ch));
    all = all && ch.passed();
  }
  json conv = json::array();
  for (const ConvergenceRow& r : rows) {
    conv.push_back({{"n_angular", r.n_angular},
                    {"n_radial", r.n_radial},
                    {"h", r.h},
                    {"l2_error", r.l2_error},
                    {"order", std::isnan(r.order) ? json(nullptr) : json(r.order)}});
  }
  write_json(c.out_dir / "report.json",
             {{"command", "phantom-verify"},
              {"mode", to_string(spec.mode)},
              {"outer_wall", to_string(spec.outer_wall)},
              {"passed", all},
              {"checks", report_checks},
              {"convergence", conv},
              {"stiff_sectors", stiff_sectors},
              {"sectors", sector_json(sectors)}});
  out << (all ? "phantom-verify: all checks passed\n" : "phantom-verify: tolerance failure\n");
  return all ? exit_ok : exit_failure;
}

void write_frame_vtk(const fs::path& path, const SliceAnalysis& a, const FrameResult& r,
                     const std::string& title) {
  std::ofstream f = io::open_output(path);
  io::write_vtk(f, a.mesh, {{"displacement", r.displacement.values}}, strain_cells(r.strain), title);
}

int cmd_analyze(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Study study = load_manifest(c);
  const CycleParams params = cycle_params(c);
  prepare_out_dir(c.out_dir);

  json report = {{"command", "analyze"},
                 {"subject_id", study.subject_id()},
                 {"slices", study.slice_count()},
                 {"frames", study.frame_count()},
                 {"mode", to_string(params.mode)},
                 {"reference_mode", c.incremental ? "incremental" : "cumulative"},
                 {"rotation_deg", params.rotation_deg_total}};

  if (study.frame_count() >= 2) {
    const VolumeCurve curve = normalized_volume_curve(study);
    std::ofstream f = io::open_output(c.out_dir / "volume.csv");
    io::write_volume_csv(f, curve);
    report["volume"] = {{"min_normalized", curve.min_normalized()},
                        {"min_over_max", curve.min_over_max()}};
    out << "volume: min normalized " << format_number(curve.min_normalized()) << ", min/max "
        << format_number(curve.min_over_max()) << '\n';
  }

  const auto analyses = cycle_strain_analysis(study, params);
  {
    std::ofstream f = io::open_output(c.out_dir / "sector_strain.csv");
    f << "slice,frame,sector,mean_disp,mean_effective,max_effective,count\n";
    for (const SliceAnalysis& a : analyses) {
      for (const FrameResult& r : a.frames) {
        for (std::size_t s = 0; s < r.sectors.n_sectors; ++s) {
          const SectorStats& st = r.sectors.sectors[s];
          f << a.slice_index << ',' << r.frame_index << ',' << s << ',' << st.mean_displacement
            << ',' << st.mean_effective << ',' << st.max_effective << ',' << st.count << '\n';
        }
      }
    }
  }
  if (c.vtk) {
    prepare_out_dir(c.out_dir / "vtk");
    for (const SliceAnalysis& a : analyses) {
      for (const FrameResult& r : a.frames) {
        char name[64];
        std::snprintf(name, sizeof name, "slice%02zu_frame%02zu.vtk", a.slice_index,
                      r.frame_index);
        write_frame_vtk(c.out_dir / "vtk" / name, a, r,
                        study.subject_id() + " slice " + std::to_string(a.slice_index) +
                            " frame " + std::to_string(r.frame_index));
      }
    }
  }
  json quality = json::array();
  for (const SliceAnalysis& a : analyses) {
    if (a.mesh_report.quality_warning()) {
      err << "warning: slice " << a.slice_index << " mesh minimum angle "
          << format_number(a.mesh_report.min_angle_deg) << " deg\n";
    }
    quality.push_back({{"slice", a.slice_index},
                       {"min_angle_deg", a.mesh_report.min_angle_deg},
                       {"quality_warning", a.mesh_report.quality_warning()}});
  }
  report["mesh"] = quality;

  if (!c.references.empty()) {
    const auto subject = study_series(analyses);
    std::vector<std::vector<SectorSummary>> refs;
    json ref_ids = json::array();
    for (const fs::path& path : c.references) {
      if (!fs::exists(path)) {
        throw Error(ErrorKind::invalid_input, "reference manifest not found: " + path.string());
      }
      const Study ref = io::load_study(path);
      ref_ids.push_back(ref.subject_id());
      refs.push_back(study_series(cycle_strain_analysis(ref, params)));
    }
    const LocalizationResult loc = infarct_localization(subject, aggregate_reference(refs), c.tau);
    json flags = json::array();
    for (SectorFlag fl : loc.flags) {
      flags.push_back(fl == SectorFlag::normal ? "normal" : "suspected-infarct");
    }
    const auto flagged = loc.flagged_sectors();
    write_json(c.out_dir / "localization.json",
               {{"subject_id", study.subject_id()},
                {"reference_ids", ref_ids},
                {"tau", loc.tau},
                {"n_sectors", loc.flags.size()},
                {"flags", flags},
                {"flagged_sectors", flagged},
                {"subject_time_mean", loc.subject_time_mean},
                {"reference_time_mean", loc.reference_time_mean},
                {"subject_series", loc.subject_series},
                {"reference_series", loc.reference_series}});
    report["flagged_sectors"] = flagged;
    out << "localization (tau " << format_number(c.tau) << "): ";
    if (flagged.empty()) out << "no sectors flagged";
    for (std::size_t i = 0; i < flagged.size(); ++i) out << (i ? " " : "sectors ") << flagged[i];
    out << '\n';
  }
  write_json(c.out_dir / "report.json", report);
  out << "analyze: wrote " << c.out_dir.string() << '\n';
  return exit_ok;
}

int cmd_synth(const RunConfig& c, std::ostream& out) {
  SynthOptions o;
  o.seed = c.seed;
  o.n_frames = c.n_frames;
  o.n_points = c.contour_points;
  o.n_slices = c.n_slices;
  o.slice_spacing_mm = c.slice_spacing_mm;
  if (c.rotation_deg) o.rotation_deg_total = *c.rotation_deg;
  o.phantom = ring_spec(c);
  const SynthKind kind = parse_synth_kind(c.kind);
  if (kind == SynthKind::phantom_cycle) {
    o.phantom.pressures = linear_pressure_ramp(c.pressure, o.n_frames - 1);
  }
  const Study study = make_synthetic_study(kind, o);
  io::save_study(c.out_dir, study, c.json_contours,
                 c.shuffle ? std::optional<std::uint64_t>(c.seed) : std::nullopt);
  out << "synth: " << study.subject_id() << " (" << study.slice_count() << " slice(s), "
      << study.frame_count() << " frames) -> " << (c.out_dir / "manifest.json").string() << '\n';
  return exit_ok;
}

/// One slice of a study analysed through the requested frame.
struct StudyFrame {
  SliceAnalysis analysis;
  std::size_t frame;
};

StudyFrame analyze_study_frame(const RunConfig& c) {
  const Study study = load_manifest(c);
  const std::size_t frame = c.frame.value_or(study.frame_count() - 1);
  if (frame >= study.frame_count()) {
    throw Error(ErrorKind::invalid_input, "frame " + std::to_string(frame) + " out of range");
  }
  return {analyze_slice(study, c.slice, cycle_params(c)), frame};
}

int cmd_mesh(const RunConfig& c, std::ostream& out) {
  Mesh mesh;
  if (c.manifest) {
    const Study study = load_manifest(c);
    if (c.slice >= study.slice_count()) {
      throw Error(ErrorKind::invalid_input, "slice " + std::to_string(c.slice) + " out of range");
    }
    const auto& frames = study.slices()[c.slice].frames;
    const std::size_t f = c.frame.value_or(0);
    if (f >= frames.size()) {
      throw Error(ErrorKind::invalid_input, "frame " + std::to_string(f) + " out of range");
    }
    const std::size_t n = c.n_angular.value_or(c.n_points);
    const Point2 center = centroid(frames[f].inner());
    mesh = triangulate_annulus(resample_uniform_angle(frames[f].inner(), center, n),
                               resample_uniform_angle(frames[f].outer(), center, n), n,
                               c.n_radial.value_or(8));
  } else {
    mesh = make_ring(ring_spec(c), c.n_angular.value_or(64), c.n_radial.value_or(8)).mesh;
  }
  const ValidationReport report = validate(mesh);
  prepare_out_dir(c.out_dir);
  {
    std::ofstream f = io::open_output(c.out_dir / "nodes.csv");
    io::write_nodes_csv(f, mesh);
  }
  {
    std::ofstream f = io::open_output(c.out_dir / "elements.csv");
    io::write_elements_csv(f, mesh);
  }
  {
    std::ofstream f = io::open_output(c.out_dir / "mesh.vtk");
    io::write_vtk(f, mesh, {}, {}, "mesh");
  }
  json checks = json::array();
  for (const MeshCheck& ch : report.checks) {
    checks.push_back({{"name", ch.name},
                      {"passed", ch.passed},
                      {"warning_only", ch.warning_only},
                      {"detail", ch.detail}});
    if (!ch.passed) {
      out << (ch.warning_only ? "warning: " : "FAIL ") << ch.name << ": " << ch.detail << '\n';
    }
  }
  write_json(c.out_dir / "report.json", {{"command", "mesh"},
                                         {"nodes", mesh.node_count()},
                                         {"triangles", mesh.triangle_count()},
                                         {"area", total_area(mesh)},
                                         {"min_angle_deg", report.min_angle_deg},
                                         {"valid", report.ok()},
                                         {"checks", checks}});
  out << "mesh: " << mesh.node_count() << " nodes, " << mesh.triangle_count()
      << " triangles, min angle " << format_number(report.min_angle_deg) << " deg\n";
  return report.ok() ? exit_ok : exit_failure;
}

/// Phantom ring solve used by solve/strain when no study is given.
struct RingSolve {
  RingSpec spec;
  RingModel ring;
  DisplacementField field;
};

RingSolve ring_solve(const RunConfig& c) {
  RingSolve r{ring_spec(c), {}, {}};
  r.ring = make_ring(r.spec, c.n_angular.value_or(64), c.n_radial.value_or(8));
  if (c.traction || !r.spec.homogeneous() || r.spec.outer_wall != OuterWall::free) {
    r.field = traction_solve(r.spec, r.ring, c.pressure);
  } else {
    SolverOptions opts;
    opts.kind = c.conjugate_gradient ? SolverKind::conjugate_gradient : SolverKind::direct;
    r.field = solve_problem(r.ring.mesh, r.ring.materials, r.spec.mode,
                            lame_dirichlet(r.spec, r.ring.mesh, c.pressure), opts);
  }
  return r;
}

void dump_matrix(const RunConfig& c, const Mesh& mesh, const MaterialField& materials,
                 ConstitutiveMode mode) {
  std::ofstream f = io::open_output(c.out_dir / "stiffness.mtx");
  write_matrix_market(f, assemble(mesh, materials, mode).stiffness);
}

int cmd_solve(const RunConfig& c, std::ostream& out) {
  prepare_out_dir(c.out_dir);
  json report = {{"command", "solve"}};
  const Mesh* mesh = nullptr;
  const DisplacementField* field = nullptr;
  std::optional<StudyFrame> sf;
  std::optional<RingSolve> rs;
  if (c.manifest) {
    sf = analyze_study_frame(c);
    mesh = &sf->analysis.mesh;
    field = &sf->analysis.frames[sf->frame].displacement;
    report["frame"] = sf->frame;
    report["slice"] = c.slice;
    if (c.dump_matrix) dump_matrix(c, *mesh, sf->analysis.materials, cycle_params(c).mode);
  } else {
    rs = ring_solve(c);
    mesh = &rs->ring.mesh;
    field = &rs->field;
    if (rs->spec.homogeneous() && rs->spec.outer_wall == OuterWall::free) {
      const double l2 = relative_l2_error(*mesh, *field, rs->spec, c.pressure);
      report["relative_l2_error"] = l2;
      out << "solve: relative L2 error against the closed form " << format_number(l2) << '\n';
    }
    if (c.dump_matrix) dump_matrix(c, *mesh, rs->ring.materials, rs->spec.mode);
  }
  {
    std::ofstream f = io::open_output(c.out_dir / "displacement.csv");
    io::write_displacement_csv(f, *mesh, *field);
  }
  {
    std::ofstream f = io::open_output(c.out_dir / "solution.vtk");
    io::write_vtk(f, *mesh, {{"displacement", field->values}}, {}, "displacement");
  }
  double max_disp = 0.0;
  for (const Vec2& u : field->values) max_disp = std::max(max_disp, norm(u));
  report["max_displacement"] = max_disp;
  report["nodes"] = mesh->node_count();
  write_json(c.out_dir / "report.json", report);
  out << "solve: max displacement " << format_number(max_disp) << '\n';
  return exit_ok;
}

int cmd_strain(const RunConfig& c, std::ostream& out) {
  prepare_out_dir(c.out_dir);
  const Mesh* mesh = nullptr;
  const DisplacementField* field = nullptr;
  StrainField strain;
  SectorSummary sectors;
  std::optional<StudyFrame> sf;
  std::optional<RingSolve> rs;
  if (c.manifest) {
    sf = analyze_study_frame(c);
    const FrameResult& r = sf->analysis.frames[sf->frame];
    mesh = &sf->analysis.mesh;
    field = &r.displacement;
    strain = r.strain;
    sectors = r.sectors;
  } else {
    rs = ring_solve(c);
    mesh = &rs->ring.mesh;
    field = &rs->field;
    strain = strain_field(*mesh, *field, rs->ring.materials);
    sectors = sector_average(*mesh, strain, *field, rs->spec.center, c.sectors);
  }
  {
    std::ofstream f = io::open_output(c.out_dir / "strain.csv");
    io::write_strain_csv(f, strain);
  }
  {
    std::ofstream f = io::open_output(c.out_dir / "sectors.csv");
    io::write_sector_csv(f, sectors);
  }
  {
    std::ofstream f = io::open_output(c.out_dir / "strain.vtk");
    io::write_vtk(f, *mesh, {{"displacement", field->values}}, strain_cells(strain), "strain");
  }
  json report = {{"command", "strain"},
                 {"global_mean_effective", sectors.global_mean_effective},
                 {"global_max_effective", sectors.global_max_effective},
                 {"sectors", sector_json(sectors)}};
  if (sf) {
    report["frame"] = sf->frame;
    report["slice"] = c.slice;
  }
  write_json(c.out_dir / "report.json", report);
  out << "strain: mean effective " << format_number(sectors.global_mean_effective) << ", max "
      << format_number(sectors.global_max_effective) << '\n';
  return exit_ok;
}

int cmd_volume(const RunConfig& c, std::ostream& out) {
  const Study study = load_manifest(c);
  const VolumeCurve curve = normalized_volume_curve(study);
  prepare_out_dir(c.out_dir);
  {
    std::ofstream f = io::open_output(c.out_dir / "volume.csv");
    io::write_volume_csv(f, curve);
  }
  write_json(c.out_dir / "report.json", {{"command", "volume"},
                                         {"subject_id", study.subject_id()},
                                         {"raw", curve.raw},
                                         {"normalized", curve.normalized},
                                         {"min_normalized", curve.min_normalized()},
                                         {"min_over_max", curve.min_over_max()}});
  out << "volume: min normalized " << format_number(curve.min_normalized()) << ", min/max "
      << format_number(curve.min_over_max()) << '\n';
  return exit_ok;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::singular_system:
    case ErrorKind::internal:
      return exit_failure;
    default:
      return exit_usage;
  }
}

}  // namespace

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.command == "phantom-verify") return cmd_phantom_verify(config, out);
    if (config.command == "analyze") return cmd_analyze(config, out, err);
    if (config.command == "synth") return cmd_synth(config, out);
    if (config.command == "mesh") return cmd_mesh(config, out);
    if (config.command == "solve") return cmd_solve(config, out);
    if (config.command == "strain") return cmd_strain(config, out);
    if (config.command == "volume") return cmd_volume(config, out);
    err << "error: unknown command '" << config.command << "'\n";
    return exit_usage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

}  // namespace cardiofem::cli
