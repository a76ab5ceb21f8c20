#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include "cardiofem/cardio.hpp"
#include "cardiofem/fem.hpp"
#include "cardiofem/mesh.hpp"
#include "cardiofem/phantom.hpp"
#include "cardiofem/strain.hpp"

namespace cardiofem::io {

void write_nodes_csv(std::ostream& out, const Mesh& mesh);
void write_elements_csv(std::ostream& out, const Mesh& mesh);
/// node_id,x,y,u,v
void write_displacement_csv(std::ostream& out, const Mesh& mesh, const DisplacementField& field);
/// element_id,eps_x,eps_y,gamma_xy,effective
void write_strain_csv(std::ostream& out, const StrainField& field);
/// sector,mean_disp,mean_effective,count
void write_sector_csv(std::ostream& out, const SectorSummary& summary);
void write_volume_csv(std::ostream& out, const VolumeCurve& curve);
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

/// Opens `path` for writing or throws ErrorKind::io.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace cardiofem::io
