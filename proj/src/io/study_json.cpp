#include "cardiofem/io/study_json.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>

#include <json.hpp>

#include "cardiofem/error.hpp"
#include "cardiofem/io/tables.hpp"

namespace cardiofem::io {

namespace fs = std::filesystem;

StudyManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open study manifest " + path.string());
  StudyManifest m;
  try {
    nlohmann::json doc;
    in >> doc;
    m.subject_id = doc.at("subject_id").get<std::string>();
    const auto& spacing = doc.at("slice_spacing_mm");
    if (spacing.is_array()) {
      m.slice_spacing_mm = spacing.get<std::vector<double>>();
    } else {
      m.slice_spacing_mm = {spacing.get<double>()};
    }
    m.frames_per_cycle = doc.value("frames_per_cycle", std::size_t{0});
    m.contours = doc.value("contours", std::string("contours.csv"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::invalid_input, path.string() + ": " + e.what());
  }
  for (double s : m.slice_spacing_mm) {
    if (!(s > 0.0)) throw Error(ErrorKind::invalid_input, path.string() + ": slice spacing must be positive");
  }
  if (m.slice_spacing_mm.empty()) {
    throw Error(ErrorKind::invalid_input, path.string() + ": slice_spacing_mm is empty");
  }
  return m;
}

void write_manifest(const fs::path& path, const StudyManifest& m) {
  nlohmann::json doc;
  doc["subject_id"] = m.subject_id;
  if (m.slice_spacing_mm.size() == 1) {
    doc["slice_spacing_mm"] = m.slice_spacing_mm.front();
  } else {
    doc["slice_spacing_mm"] = m.slice_spacing_mm;
  }
  doc["frames_per_cycle"] = m.frames_per_cycle;
  doc["contours"] = m.contours;
  std::ofstream out = open_output(path);
  out << doc.dump(2) << '\n';
}

Study build_study(const StudyManifest& manifest, const std::vector<ContourRow>& rows) {
  using Key = std::pair<std::size_t, std::size_t>;  // slice, frame
  std::map<Key, std::map<std::size_t, Point2>> inner;
  std::map<Key, std::map<std::size_t, Point2>> outer;
  for (const ContourRow& r : rows) {
    if (r.subject_id != manifest.subject_id) continue;
    auto& target = r.boundary == BoundaryLabel::inner ? inner : outer;
    const bool fresh = target[{r.slice, r.frame}].emplace(r.point_index, Point2{r.x, r.y}).second;
    if (!fresh) {
      throw Error(ErrorKind::invalid_input,
                  "duplicate point_index " + std::to_string(r.point_index) + " in slice " +
                      std::to_string(r.slice) + ", frame " + std::to_string(r.frame) + " " +
                      std::string(to_string(r.boundary)) + " contour");
    }
  }
  if (inner.empty() && outer.empty()) {
    throw Error(ErrorKind::invalid_input, "no contour rows for subject '" + manifest.subject_id + "'");
  }

  std::size_t n_slices = 0;
  std::size_t n_frames = 0;
  for (const auto* m : {&inner, &outer}) {
    for (const auto& [key, pts] : *m) {
      n_slices = std::max(n_slices, key.first + 1);
      n_frames = std::max(n_frames, key.second + 1);
    }
  }
  if (manifest.frames_per_cycle != 0 && manifest.frames_per_cycle != n_frames) {
    throw Error(ErrorKind::invalid_input, "manifest declares " +
                                              std::to_string(manifest.frames_per_cycle) +
                                              " frames per cycle but the contours hold " +
                                              std::to_string(n_frames));
  }
  if (manifest.slice_spacing_mm.size() != 1 && manifest.slice_spacing_mm.size() != n_slices) {
    throw Error(ErrorKind::invalid_input, "slice_spacing_mm has " +
                                              std::to_string(manifest.slice_spacing_mm.size()) +
                                              " entries for " + std::to_string(n_slices) + " slices");
  }

  auto polygon = [](const std::map<std::size_t, Point2>& pts) {
    std::vector<Point2> out;
    out.reserve(pts.size());
    for (const auto& [idx, p] : pts) out.push_back(p);
    return out;
  };

  std::vector<SliceRecord> slices(n_slices);
  for (std::size_t s = 0; s < n_slices; ++s) {
    slices[s].slice_spacing_mm =
        manifest.slice_spacing_mm.size() == 1 ? manifest.slice_spacing_mm.front()
                                              : manifest.slice_spacing_mm[s];
    for (std::size_t f = 0; f < n_frames; ++f) {
      const std::string where = "slice " + std::to_string(s) + ", frame " + std::to_string(f);
      const auto in_it = inner.find({s, f});
      const auto out_it = outer.find({s, f});
      if (in_it == inner.end() || out_it == outer.end()) {
        throw Error(ErrorKind::invalid_input, where + ": missing inner or outer contour");
      }
      try {
        slices[s].frames.emplace_back(f, Contour(polygon(in_it->second), BoundaryLabel::inner),
                                      Contour(polygon(out_it->second), BoundaryLabel::outer));
      } catch (const Error& e) {
        throw e.with_context("slice " + std::to_string(s));
      }
    }
  }
  return Study(manifest.subject_id, std::move(slices));
}

Study load_study(const fs::path& manifest_path) {
  const StudyManifest manifest = read_manifest(manifest_path);
  const fs::path contour_path = manifest_path.parent_path() / manifest.contours;
  std::ifstream in(contour_path);
  if (!in) throw Error(ErrorKind::io, "cannot open contour file " + contour_path.string());
  const bool json = contour_path.extension() == ".json";
  const std::vector<ContourRow> rows = json ? read_contour_json(in, contour_path.string())
                                            : read_contour_csv(in, contour_path.string());
  try {
    return build_study(manifest, rows);
  } catch (const Error& e) {
    throw e.with_context(contour_path.string());
  }
}

std::vector<ContourRow> study_rows(const Study& study, std::optional<std::uint64_t> shuffle_seed) {
  std::vector<ContourRow> rows;
  for (std::size_t s = 0; s < study.slice_count(); ++s) {
    for (const FrameContours& frame : study.slices()[s].frames) {
      for (const Contour* c : {&frame.inner(), &frame.outer()}) {
        for (std::size_t i = 0; i < c->size(); ++i) {
          rows.push_back({study.subject_id(), s, frame.frame_index(), c->label(), i, (*c)[i].x,
                          (*c)[i].y});
        }
      }
    }
  }
  if (shuffle_seed) {
    // Fisher-Yates with raw engine output so the order is portable.
    std::mt19937_64 rng(*shuffle_seed);
    for (std::size_t i = rows.size(); i > 1; --i) {
      std::swap(rows[i - 1], rows[rng() % i]);
    }
  }
  return rows;
}

void save_study(const fs::path& dir, const Study& study, bool json_contours,
                std::optional<std::uint64_t> shuffle_seed) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create directory " + dir.string() + ": " + ec.message());
  StudyManifest m;
  m.subject_id = study.subject_id();
  for (const SliceRecord& s : study.slices()) m.slice_spacing_mm.push_back(s.slice_spacing_mm);
  if (std::all_of(m.slice_spacing_mm.begin(), m.slice_spacing_mm.end(),
                  [&](double v) { return v == m.slice_spacing_mm.front(); })) {
    m.slice_spacing_mm.resize(1);
  }
  m.frames_per_cycle = study.frame_count();
  m.contours = json_contours ? "contours.json" : "contours.csv";
  const auto rows = study_rows(study, shuffle_seed);
  std::ofstream out = open_output(dir / m.contours);
  if (json_contours) {
    write_contour_json(out, rows);
  } else {
    write_contour_csv(out, rows);
  }
  write_manifest(dir / "manifest.json", m);
}

}  // namespace cardiofem::io
