// Python bindings: meshes, one-call runs, the flat stencil study and EOC.

#include "decflow/config.hpp"
#include "decflow/diagnostics.hpp"
#include "decflow/error.hpp"
#include "decflow/flatfd.hpp"
#include "decflow/output.hpp"
#include "decflow/solver.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace decflow;

namespace {

struct PyMesh {
    SimplicialComplex complex;
    DualGeometry dual;

    Eigen::MatrixX3d vertices() const {
        Eigen::MatrixX3d out(complex.num_vertices(), 3);
        for (Index v = 0; v < complex.num_vertices(); ++v) out.row(v) = complex.position(v).transpose();
        return out;
    }
    Eigen::MatrixX3i faces() const {
        Eigen::MatrixX3i out(complex.num_faces(), 3);
        for (Index f = 0; f < complex.num_faces(); ++f) {
            for (int k = 0; k < 3; ++k) out(f, k) = complex.face(f)[k];
        }
        return out;
    }
    Eigen::MatrixX2i edges() const {
        Eigen::MatrixX2i out(complex.num_edges(), 2);
        for (Index e = 0; e < complex.num_edges(); ++e) {
            out(e, 0) = complex.edge(e)[0];
            out(e, 1) = complex.edge(e)[1];
        }
        return out;
    }
};

PyMesh make_mesh(SimplicialComplex cx) {
    PyMesh m{std::move(cx), {}};
    m.dual = circumcentric_dual(m.complex);
    return m;
}

py::dict run_config(const std::string& text) {
    const RunConfig config = parse_config(text);
    RunResult result;
    {
        py::gil_scoped_release release;
        result = run(config.simulation);
    }
    std::vector<double> time, energy, divergence, curl, solver;
    for (const auto& r : result.history) {
        time.push_back(r.time);
        energy.push_back(r.kinetic_energy);
        divergence.push_back(r.divergence_residual);
        curl.push_back(r.curl_max);
        solver.push_back(r.solver_residual);
    }
    const auto& last = result.snapshots.back();
    py::dict out;
    out["time"] = time;
    out["E"] = energy;
    out["div_res"] = divergence;
    out["curl_max"] = curl;
    out["solver_res"] = solver;
    out["u"] = last.u.values();
    out["p"] = last.p.values();
    std::vector<std::pair<Vec3, double>> vortices;
    for (const auto& v : result.history.back().vortices.vortices) vortices.emplace_back(v.position, v.strength);
    out["vortices"] = vortices;
    return out;
}

} // namespace

PYBIND11_MODULE(_decflow, m) {
    m.doc() = "Surface Navier-Stokes solver on triangle meshes (discrete exterior calculus)";

    auto base = py::register_exception<Error>(m, "DecflowError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<MeshError>(m, "MeshError", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());

    m.def("version", &version);

    py::class_<PyMesh>(m, "Mesh")
        .def_property_readonly("vertices", &PyMesh::vertices)
        .def_property_readonly("faces", &PyMesh::faces)
        .def_property_readonly("edges", &PyMesh::edges)
        .def_property_readonly("euler_characteristic", [](const PyMesh& s) { return s.complex.euler_characteristic(); })
        .def_property_readonly("mesh_size", [](const PyMesh& s) { return s.dual.mesh_size(); })
        .def_property_readonly("area", [](const PyMesh& s) { return s.dual.total_face_area(); })
        .def_property_readonly("well_centered",
                               [](const PyMesh& s) { return well_centered_report(s.complex, s.dual).passed; })
        .def("d0", [](const PyMesh& s) { return exterior_derivative_0(s.complex); })
        .def("d1", [](const PyMesh& s) { return exterior_derivative_1(s.complex); })
        .def("hodge_star", [](const PyMesh& s) { return hodge_star_matrix(s.complex, s.dual); })
        .def("__repr__", [](const PyMesh& s) {
            return "<Mesh V=" + std::to_string(s.complex.num_vertices()) + " E=" +
                   std::to_string(s.complex.num_edges()) + " F=" + std::to_string(s.complex.num_faces()) + ">";
        });

    m.def(
        "generate_mesh",
        [](const std::string& surface, int resolution) {
            const RunConfig c = parse_config("surface = " + surface + "\n");
            return make_mesh(generate_mesh(c.simulation.surface, resolution));
        },
        py::arg("surface"), py::arg("resolution"));
    m.def(
        "load_mesh", [](const std::string& path) { return make_mesh(generate_mesh(SurfaceDescriptor::external(path), 0)); },
        py::arg("path"));

    m.def("format_config", [](const std::string& text) { return format_config(parse_config(text)); },
          py::arg("text"), "Parses a config and returns its fully resolved form.");
    m.def("run", &run_config, py::arg("config"),
          "Runs a configuration given as text; returns the diagnostics history and final fields.");

    m.def(
        "flatfd_study",
        [](const std::vector<int>& ns) {
            std::vector<py::dict> rows;
            for (const auto& r : flatfd::consistency_study(ns)) {
                py::dict d;
                d["field"] = r.field;
                d["stencil"] = flatfd::to_string(r.stencil);
                d["n"] = r.n;
                d["h"] = r.h;
                d["error"] = r.error;
                d["eoc"] = r.eoc;
                rows.push_back(d);
            }
            return rows;
        },
        py::arg("ns") = std::vector<int>{16, 32, 64, 128});

    m.def("eoc_table", &eoc_table, py::arg("errors"), py::arg("mesh_sizes"));
}
