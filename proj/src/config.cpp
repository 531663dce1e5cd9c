#include "decflow/config.hpp"

#include "decflow/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace decflow {

namespace {

const std::map<std::string, std::string>& key_sections() {
    static const std::map<std::string, std::string> keys = {
        {"surface", "surface"},      {"mesh", "surface"},         {"resolution", "surface"},
        {"radius", "surface"},       {"a", "surface"},            {"b", "surface"},
        {"c", "surface"},            {"major_radius", "surface"}, {"minor_radius", "surface"},
        {"re", "solver"},            {"tau", "solver"},           {"t_end", "solver"},
        {"initial", "solver"},       {"stream_gradient", "solver"}, {"alpha", "solver"},
        {"beta", "solver"},          {"gauge_vertex", "solver"},  {"curvature", "solver"},
        {"linear_solver", "solver"}, {"tolerance", "solver"},     {"max_iterations", "solver"},
        {"iterative_fallback", "solver"},
        {"directory", "output"},     {"output_every", "output"},  {"vtk", "output"},
        {"vortex_count", "output"},
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string value;
    int line = 0;
};

class Values {
public:
    explicit Values(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    const std::string& raw(const std::string& key) const { return entries_.at(key).value; }

    [[noreturn]] void fail(const std::string& key, const std::string& expected) const {
        const auto& e = entries_.at(key);
        throw ConfigError("line " + std::to_string(e.line) + ": '" + key + "' expects " + expected + ", got '" +
                          e.value + "'");
    }

    void get(const std::string& key, double& out) const {
        if (!has(key)) return;
        const std::string& s = raw(key);
        double v = 0.0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size()) fail(key, "a number");
        out = v;
    }

    void get(const std::string& key, int& out) const {
        if (!has(key)) return;
        const std::string& s = raw(key);
        int v = 0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size()) fail(key, "an integer");
        out = v;
    }

    void get(const std::string& key, bool& out) const {
        if (!has(key)) return;
        const std::string& s = raw(key);
        if (s == "true" || s == "yes" || s == "1") {
            out = true;
        } else if (s == "false" || s == "no" || s == "0") {
            out = false;
        } else {
            fail(key, "a boolean");
        }
    }

    void get(const std::string& key, Vec3& out) const {
        if (!has(key)) return;
        std::istringstream in(raw(key));
        Vec3 v;
        std::string extra;
        if (!(in >> v.x() >> v.y() >> v.z()) || (in >> extra)) fail(key, "three numbers");
        out = v;
    }

    template <class Fn>
    void get_enum(const std::string& key, Fn&& convert) const {
        if (!has(key)) return;
        try {
            convert(raw(key));
        } catch (const ConfigError&) {
            fail(key, "a known name");
        }
    }

private:
    std::map<std::string, Entry> entries_;
};

std::string number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

InitialCondition default_initial_condition(SurfaceKind kind) {
    switch (kind) {
    case SurfaceKind::Sphere: return InitialCondition::killing_sphere();
    case SurfaceKind::Ellipsoid: return InitialCondition::stream_curl({0.0, 1.0, 0.1});
    case SurfaceKind::Biconcave: return InitialCondition::stream_curl({0.0, 1.0, 1.0});
    case SurfaceKind::Torus: return InitialCondition::harmonic_torus(0.5, 0.5);
    case SurfaceKind::ExternalMesh: return InitialCondition::stream_curl({0.0, 1.0, 0.0});
    }
    return InitialCondition::zero();
}

RunConfig parse_config(const std::string& text) {
    std::map<std::string, Entry> entries;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "surface" && section != "solver" && section != "output") {
                throw ConfigError(where + "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto known = key_sections().find(key);
        if (known == key_sections().end()) throw ConfigError(where + "unknown key '" + key + "'");
        if (!section.empty() && known->second != section) {
            throw ConfigError(where + "key '" + key + "' belongs to [" + known->second + "], not [" + section + "]");
        }
        if (entries.count(key)) throw ConfigError(where + "duplicate key '" + key + "'");
        entries[key] = {value, line_no};
    }
    const Values values(std::move(entries));

    RunConfig config;
    SimulationConfig& sim = config.simulation;

    SurfaceKind kind = values.has("mesh") ? SurfaceKind::ExternalMesh : SurfaceKind::Sphere;
    values.get_enum("surface", [&](const std::string& s) { kind = surface_kind_from_string(s); });
    switch (kind) {
    case SurfaceKind::Sphere: sim.surface = SurfaceDescriptor::sphere(); break;
    case SurfaceKind::Ellipsoid: sim.surface = SurfaceDescriptor::ellipsoid(); break;
    case SurfaceKind::Biconcave: sim.surface = SurfaceDescriptor::biconcave(); break;
    case SurfaceKind::Torus: sim.surface = SurfaceDescriptor::torus(); break;
    case SurfaceKind::ExternalMesh: sim.surface = SurfaceDescriptor::external(values.has("mesh") ? values.raw("mesh") : ""); break;
    }
    if (values.has("mesh") && kind != SurfaceKind::ExternalMesh) {
        throw ConfigError("'mesh' given together with surface = " + to_string(kind));
    }
    values.get("radius", sim.surface.radius);
    values.get("a", sim.surface.a);
    values.get("b", sim.surface.b);
    values.get("c", sim.surface.c);
    values.get("major_radius", sim.surface.major_radius);
    values.get("minor_radius", sim.surface.minor_radius);
    if (kind == SurfaceKind::Torus) sim.resolution = 32;
    values.get("resolution", sim.resolution);

    values.get("re", sim.reynolds);
    values.get("tau", sim.tau);
    values.get("t_end", sim.t_end);
    sim.initial = default_initial_condition(kind);
    values.get_enum("initial", [&](const std::string& s) {
        const auto ic_kind = initial_condition_kind_from_string(s);
        if (ic_kind != sim.initial.kind) {
            sim.initial = ic_kind == InitialCondition::Kind::StreamCurl
                              ? InitialCondition::stream_curl({0.0, 1.0, 0.0})
                              : InitialCondition::of_kind(ic_kind);
        }
    });
    values.get("stream_gradient", sim.initial.stream_gradient);
    values.get("alpha", sim.initial.alpha);
    values.get("beta", sim.initial.beta);
    values.get("gauge_vertex", sim.gauge_vertex);
    values.get_enum("curvature", [&](const std::string& s) { sim.curvature = curvature_choice_from_string(s); });
    values.get_enum("linear_solver",
                    [&](const std::string& s) { sim.linear_solver.backend = linear_backend_from_string(s); });
    values.get("tolerance", sim.linear_solver.tolerance);
    values.get("max_iterations", sim.linear_solver.max_iterations);
    values.get("iterative_fallback", sim.linear_solver.iterative_fallback);

    if (values.has("directory")) config.output.directory = values.raw("directory");
    values.get("output_every", sim.output_every);
    values.get("vtk", config.output.write_vtk);
    values.get("vortex_count", sim.vortex_count);

    sim.validate();
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string format_config(const RunConfig& config) {
    const SimulationConfig& sim = config.simulation;
    const SurfaceDescriptor& s = sim.surface;
    std::ostringstream out;
    out << "[surface]\n";
    out << "surface = " << to_string(s.kind) << "\n";
    switch (s.kind) {
    case SurfaceKind::Sphere: out << "radius = " << number(s.radius) << "\n"; break;
    case SurfaceKind::Ellipsoid:
        out << "a = " << number(s.a) << "\nb = " << number(s.b) << "\nc = " << number(s.c) << "\n";
        break;
    case SurfaceKind::Biconcave: out << "a = " << number(s.a) << "\nc = " << number(s.c) << "\n"; break;
    case SurfaceKind::Torus:
        out << "major_radius = " << number(s.major_radius) << "\nminor_radius = " << number(s.minor_radius) << "\n";
        break;
    case SurfaceKind::ExternalMesh: out << "mesh = " << s.mesh_path.string() << "\n"; break;
    }
    out << "resolution = " << sim.resolution << "\n";

    out << "\n[solver]\n";
    out << "re = " << number(sim.reynolds) << "\n";
    out << "tau = " << number(sim.tau) << "\n";
    out << "t_end = " << number(sim.t_end) << "\n";
    out << "initial = " << to_string(sim.initial.kind) << "\n";
    if (sim.initial.kind == InitialCondition::Kind::StreamCurl) {
        const Vec3& g = sim.initial.stream_gradient;
        out << "stream_gradient = " << number(g.x()) << " " << number(g.y()) << " " << number(g.z()) << "\n";
    }
    if (sim.initial.kind == InitialCondition::Kind::HarmonicTorus) {
        out << "alpha = " << number(sim.initial.alpha) << "\nbeta = " << number(sim.initial.beta) << "\n";
    }
    out << "gauge_vertex = " << sim.gauge_vertex << "\n";
    out << "curvature = " << to_string(sim.curvature) << "\n";
    out << "linear_solver = " << to_string(sim.linear_solver.backend) << "\n";
    out << "tolerance = " << number(sim.linear_solver.tolerance) << "\n";
    out << "max_iterations = " << sim.linear_solver.max_iterations << "\n";
    out << "iterative_fallback = " << (sim.linear_solver.iterative_fallback ? "true" : "false") << "\n";

    out << "\n[output]\n";
    out << "directory = " << config.output.directory.string() << "\n";
    out << "output_every = " << sim.output_every << "\n";
    out << "vtk = " << (config.output.write_vtk ? "true" : "false") << "\n";
    out << "vortex_count = " << sim.vortex_count << "\n";
    return out.str();
}

} // namespace decflow
