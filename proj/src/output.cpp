#include "decflow/output.hpp"

#include "decflow/error.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>

#ifndef DECFLOW_VERSION
#define DECFLOW_VERSION "0.0.0"
#endif

namespace decflow {

namespace {

void put(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

void put_scalars(std::ostream& os, const std::string& name, const std::vector<double>& values) {
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : values) {
        put(os, v);
        os << '\n';
    }
}

[[noreturn]] void bad_vtk(const std::string& what) { throw MeshError("vtk: " + what); }

std::string next_token(std::istream& is, const char* context) {
    std::string tok;
    if (!(is >> tok)) bad_vtk(std::string("unexpected end of file in ") + context);
    return tok;
}

double next_double(std::istream& is) {
    const std::string tok = next_token(is, "data");
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) bad_vtk("malformed number '" + tok + "'");
        return v;
    } catch (const std::logic_error&) {
        if (tok == "nan") return std::numeric_limits<double>::quiet_NaN();
        bad_vtk("malformed number '" + tok + "'");
    }
}

long next_count(std::istream& is) {
    const std::string tok = next_token(is, "count");
    try {
        return std::stol(tok);
    } catch (const std::logic_error&) {
        bad_vtk("malformed count '" + tok + "'");
    }
}

std::vector<double> read_scalar_block(std::istream& is, long n) {
    if (next_token(is, "scalars") != "LOOKUP_TABLE") bad_vtk("expected LOOKUP_TABLE");
    next_token(is, "scalars");
    std::vector<double> values(n);
    for (auto& v : values) v = next_double(is);
    return values;
}

} // namespace

std::string version() { return DECFLOW_VERSION; }

VtkData snapshot_fields(const SolverState& state, const SimplicialComplex& complex, const DualGeometry& dual) {
    VtkData data;
    data.points.assign(complex.positions().begin(), complex.positions().end());
    for (const auto& f : complex.faces()) data.polygons.push_back({f[0], f[1], f[2]});
    data.point_vectors["velocity"] = reconstruct_vertex_vectors(state.u, complex, dual);
    data.point_scalars["p"] = std::vector<double>(state.p.values().begin(), state.p.values().end());
    data.point_scalars["q"] = std::vector<double>(state.q.values().begin(), state.q.values().end());
    const Eigen::VectorXd div = divergence_vertex(state.u, complex, dual).values();
    data.point_scalars["divergence"] = std::vector<double>(div.begin(), div.end());
    const Eigen::VectorXd w = vorticity_form(state, complex, dual).face;
    data.cell_scalars["vorticity"] = std::vector<double>(w.begin(), w.end());
    return data;
}

void write_vtk(std::ostream& os, const VtkData& data, const std::string& title) {
    os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET POLYDATA\n";
    os << "POINTS " << data.points.size() << " double\n";
    for (const auto& p : data.points) {
        put(os, p.x());
        os << ' ';
        put(os, p.y());
        os << ' ';
        put(os, p.z());
        os << '\n';
    }
    std::size_t size = 0;
    for (const auto& poly : data.polygons) size += poly.size() + 1;
    os << "POLYGONS " << data.polygons.size() << ' ' << size << '\n';
    for (const auto& poly : data.polygons) {
        os << poly.size();
        for (Index v : poly) os << ' ' << v;
        os << '\n';
    }
    if (!data.point_scalars.empty() || !data.point_vectors.empty()) {
        os << "POINT_DATA " << data.points.size() << '\n';
        for (const auto& [name, vectors] : data.point_vectors) {
            os << "VECTORS " << name << " double\n";
            for (const auto& v : vectors) {
                put(os, v.x());
                os << ' ';
                put(os, v.y());
                os << ' ';
                put(os, v.z());
                os << '\n';
            }
        }
        for (const auto& [name, values] : data.point_scalars) put_scalars(os, name, values);
    }
    if (!data.cell_scalars.empty()) {
        os << "CELL_DATA " << data.polygons.size() << '\n';
        for (const auto& [name, values] : data.cell_scalars) put_scalars(os, name, values);
    }
}

void write_vtk(const std::filesystem::path& path, const SolverState& state, const SimplicialComplex& complex,
               const DualGeometry& dual) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path.string());
    char title[96];
    std::snprintf(title, sizeof title, "decflow step %ld time %.17g", state.step_index, state.time);
    write_vtk(os, snapshot_fields(state, complex, dual), title);
    if (!os) throw ConfigError("write failed for " + path.string());
}

VtkData read_vtk(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# vtk DataFile", 0) != 0) bad_vtk("missing header");
    std::getline(is, line);  // title
    if (next_token(is, "header") != "ASCII") bad_vtk("only ASCII files are supported");
    if (next_token(is, "header") != "DATASET" || next_token(is, "header") != "POLYDATA") {
        bad_vtk("only POLYDATA datasets are supported");
    }

    VtkData data;
    long point_count = 0, cell_count = 0;
    enum class Block { None, Point, Cell } block = Block::None;
    std::string tok;
    while (is >> tok) {
        if (tok == "POINTS") {
            point_count = next_count(is);
            next_token(is, "POINTS");
            data.points.resize(point_count);
            for (auto& p : data.points) {
                const double x = next_double(is), y = next_double(is), z = next_double(is);
                p = Vec3(x, y, z);
            }
        } else if (tok == "POLYGONS") {
            cell_count = next_count(is);
            next_count(is);
            data.polygons.resize(cell_count);
            for (auto& poly : data.polygons) {
                poly.resize(next_count(is));
                for (auto& v : poly) {
                    v = static_cast<Index>(next_count(is));
                    if (v < 0 || v >= point_count) bad_vtk("polygon index out of range");
                }
            }
        } else if (tok == "POINT_DATA") {
            if (next_count(is) != point_count) bad_vtk("POINT_DATA size mismatch");
            block = Block::Point;
        } else if (tok == "CELL_DATA") {
            if (next_count(is) != cell_count) bad_vtk("CELL_DATA size mismatch");
            block = Block::Cell;
        } else if (tok == "SCALARS") {
            const std::string name = next_token(is, "SCALARS");
            next_token(is, "SCALARS");
            next_token(is, "SCALARS");
            if (block == Block::Point) {
                data.point_scalars[name] = read_scalar_block(is, point_count);
            } else if (block == Block::Cell) {
                data.cell_scalars[name] = read_scalar_block(is, cell_count);
            } else {
                bad_vtk("SCALARS outside a data block");
            }
        } else if (tok == "VECTORS") {
            if (block != Block::Point) bad_vtk("only point vectors are supported");
            const std::string name = next_token(is, "VECTORS");
            next_token(is, "VECTORS");
            auto& vectors = data.point_vectors[name];
            vectors.resize(point_count);
            for (auto& v : vectors) {
                const double x = next_double(is), y = next_double(is), z = next_double(is);
                v = Vec3(x, y, z);
            }
        } else {
            bad_vtk("unsupported keyword '" + tok + "'");
        }
    }
    return data;
}

VtkData read_vtk(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) bad_vtk("cannot read " + path.string());
    return read_vtk(is);
}

std::string csv_header(int vortex_count) {
    std::string h = "time,E,div_res,curl_max,solver_res";
    for (int k = 1; k <= vortex_count; ++k) {
        const std::string p = ",vortex" + std::to_string(k) + "_";
        h += p + "x" + p + "y" + p + "z" + p + "s";
    }
    return h;
}

CsvWriter::CsvWriter(std::ostream& os, int vortex_count) : os_(os), vortex_count_(vortex_count) {
    os_ << csv_header(vortex_count_) << '\n';
}

void CsvWriter::write(const DiagnosticsRecord& r) {
    auto field = [&](double v) {
        os_ << ',';
        put(os_, v);
    };
    put(os_, r.time);
    field(r.kinetic_energy);
    field(r.divergence_residual);
    field(r.curl_max);
    field(r.solver_residual);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int k = 0; k < vortex_count_; ++k) {
        if (k < static_cast<int>(r.vortices.vortices.size())) {
            const auto& v = r.vortices.vortices[k];
            field(v.position.x());
            field(v.position.y());
            field(v.position.z());
            field(v.strength);
        } else {
            for (int i = 0; i < 4; ++i) field(nan);
        }
    }
    os_ << '\n';
    os_.flush();
}

MeshStatistics mesh_statistics(const SimplicialComplex& complex, const DualGeometry& dual) {
    return {complex.num_vertices(), complex.num_edges(),      complex.num_faces(),
            complex.euler_characteristic(), dual.mesh_size(), dual.total_face_area(),
            well_centered_report(complex, dual)};
}

void print_mesh_statistics(std::ostream& os, const MeshStatistics& s) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "V=%d E=%d F=%d chi=%d\nh=%.6g area=%.6g\n", s.vertices, s.edges, s.faces,
                  s.euler_characteristic, s.mesh_size, s.total_area);
    os << buf;
    const auto& w = s.well_centered;
    std::snprintf(buf, sizeof buf, "well-centered: %s (%zu obtuse faces, %zu non-positive dual edges, max angle %.2f deg)\n",
                  w.passed ? "yes" : "no", w.obtuse_faces.size(), w.nonpositive_dual_edges.size(),
                  w.worst_angle * 180.0 / std::numbers::pi);
    os << buf;
}

std::string manifest_json(const RunConfig& config, const MeshStatistics& stats,
                          const std::vector<PhaseTiming>& timings, const std::string& status) {
    nlohmann::ordered_json j;
    j["version"] = version();
    j["status"] = status;
    j["config"] = format_config(config);
    j["mesh"] = {
        {"vertices", stats.vertices},
        {"edges", stats.edges},
        {"faces", stats.faces},
        {"euler_characteristic", stats.euler_characteristic},
        {"h", stats.mesh_size},
        {"area", stats.total_area},
        {"well_centered",
         {{"passed", stats.well_centered.passed},
          {"obtuse_faces", stats.well_centered.obtuse_faces.size()},
          {"nonpositive_dual_edges", stats.well_centered.nonpositive_dual_edges.size()},
          {"worst_face", stats.well_centered.worst_face},
          {"worst_angle", stats.well_centered.worst_angle}}},
    };
    auto& t = j["timings"] = nlohmann::ordered_json::object();
    for (const auto& p : timings) t[p.phase] = p.seconds;
    return j.dump(2);
}

} // namespace decflow
