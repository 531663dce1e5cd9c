#pragma once

#include "decflow/config.hpp"
#include "decflow/diagnostics.hpp"
#include "decflow/mesh.hpp"
#include "decflow/state.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace decflow {

/// Contents of a legacy ASCII VTK PolyData file as written by write_vtk.
struct VtkData {
    std::vector<Vec3> points;
    std::vector<std::vector<Index>> polygons;
    std::map<std::string, std::vector<double>> point_scalars;
    std::map<std::string, std::vector<Vec3>> point_vectors;
    std::map<std::string, std::vector<double>> cell_scalars;
};

/// Per-vertex reconstructed velocity, p, q and divergence residual plus the
/// per-face vorticity. Floats use 17 significant digits.
VtkData snapshot_fields(const SolverState& state, const SimplicialComplex& complex, const DualGeometry& dual);

void write_vtk(std::ostream& os, const VtkData& data, const std::string& title);
void write_vtk(const std::filesystem::path& path, const SolverState& state, const SimplicialComplex& complex,
               const DualGeometry& dual);

/// Reads the subset of the legacy format produced by write_vtk.
VtkData read_vtk(std::istream& is);
VtkData read_vtk(const std::filesystem::path& path);

/// CSV time series: time,E,div_res,curl_max,solver_res and x,y,z,strength
/// for vortex_count tracked vortices (nan where none was found).
class CsvWriter {
public:
    CsvWriter(std::ostream& os, int vortex_count);
    void write(const DiagnosticsRecord& record);

private:
    std::ostream& os_;
    int vortex_count_;
};

std::string csv_header(int vortex_count);

struct MeshStatistics {
    Index vertices = 0, edges = 0, faces = 0;
    int euler_characteristic = 0;
    double mesh_size = 0.0;
    double total_area = 0.0;
    WellCenteredReport well_centered;
};

MeshStatistics mesh_statistics(const SimplicialComplex& complex, const DualGeometry& dual);

/// Human-readable mesh summary as printed by `decflow mesh-info`.
void print_mesh_statistics(std::ostream& os, const MeshStatistics& stats);

struct PhaseTiming {
    std::string phase;
    double seconds = 0.0;
};

/// JSON manifest: resolved config echo, mesh statistics, version, timings.
std::string manifest_json(const RunConfig& config, const MeshStatistics& stats,
                          const std::vector<PhaseTiming>& timings, const std::string& status);

/// Library version string.
std::string version();

} // namespace decflow
