#include "cardiofem/io/tables.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "cardiofem/error.hpp"

namespace cardiofem::io {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

void write_nodes_csv(std::ostream& out, const Mesh& mesh) {
  out << "node_id,x,y\n";
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    out << i << ',' << mesh.nodes[i].x << ',' << mesh.nodes[i].y << '\n';
  }
}

void write_elements_csv(std::ostream& out, const Mesh& mesh) {
  out << "element_id,n0,n1,n2\n";
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    out << t << ',' << tri[0] << ',' << tri[1] << ',' << tri[2] << '\n';
  }
}

void write_displacement_csv(std::ostream& out, const Mesh& mesh, const DisplacementField& field) {
  out << "node_id,x,y,u,v\n";
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    out << i << ',' << mesh.nodes[i].x << ',' << mesh.nodes[i].y << ',' << field[i].x << ','
        << field[i].y << '\n';
  }
}

void write_strain_csv(std::ostream& out, const StrainField& field) {
  out << "element_id,eps_x,eps_y,gamma_xy,effective\n";
  for (std::size_t t = 0; t < field.size(); ++t) {
    const Strain& s = field.strains[t];
    out << t << ',' << s.eps_x << ',' << s.eps_y << ',' << s.gamma_xy << ',' << field.effective[t]
        << '\n';
  }
}

void write_sector_csv(std::ostream& out, const SectorSummary& summary) {
  out << "sector,mean_disp,mean_effective,count\n";
  for (std::size_t s = 0; s < summary.n_sectors; ++s) {
    const SectorStats& st = summary.sectors[s];
    out << s << ',' << st.mean_displacement << ',' << st.mean_effective << ',' << st.count << '\n';
  }
}

void write_volume_csv(std::ostream& out, const VolumeCurve& curve) {
  out << "frame,volume,normalized\n";
  for (std::size_t f = 0; f < curve.raw.size(); ++f) {
    out << f << ',' << curve.raw[f] << ',' << curve.normalized[f] << '\n';
  }
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "n_angular,n_radial,h,l2_error,order\n";
  for (const ConvergenceRow& r : rows) {
    out << r.n_angular << ',' << r.n_radial << ',' << r.h << ',' << r.l2_error << ',';
    if (std::isnan(r.order)) {
      out << "";
    } else {
      out << r.order;
    }
    out << '\n';
  }
}

}  // namespace cardiofem::io
