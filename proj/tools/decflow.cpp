// Command line front end: run | convergence | flatfd-study | mesh-info.

#include "decflow/config.hpp"
#include "decflow/error.hpp"
#include "decflow/experiments.hpp"
#include "decflow/flatfd.hpp"
#include "decflow/output.hpp"
#include "decflow/solver.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace decflow;

namespace {

struct Overrides {
    std::string config;
    std::string mesh;
    std::string out;
    std::optional<double> re, tau, t_end;
    std::optional<int> resolution;
};

void add_common_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "Config file (key = value with [surface]/[solver]/[output])");
    cmd->add_option("--mesh", o.mesh, "OFF or OBJ mesh; replaces the analytic surface");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--re", o.re, "Reynolds number");
    cmd->add_option("--tau", o.tau, "Time step");
    cmd->add_option("--t-end", o.t_end, "End time");
    cmd->add_option("--resolution", o.resolution, "Geodesic frequency (sphere, ellipsoid, biconcave) or n_theta (torus)");
}

RunConfig resolve(const Overrides& o) {
    RunConfig config = o.config.empty() ? parse_config("") : load_config(o.config);
    SimulationConfig& sim = config.simulation;
    if (!o.mesh.empty()) {
        sim.surface = SurfaceDescriptor::external(o.mesh);
        if (sim.initial.kind == InitialCondition::Kind::KillingSphere ||
            sim.initial.kind == InitialCondition::Kind::HarmonicTorus) {
            sim.initial = default_initial_condition(SurfaceKind::ExternalMesh);
        }
    }
    if (!o.out.empty()) config.output.directory = o.out;
    if (o.re) sim.reynolds = *o.re;
    if (o.tau) sim.tau = *o.tau;
    if (o.t_end) sim.t_end = *o.t_end;
    if (o.resolution) sim.resolution = *o.resolution;
    sim.validate();
    return config;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_run(const Overrides& o) {
    const RunConfig config = resolve(o);
    const SimulationConfig& sim = config.simulation;
    const fs::path dir = config.output.directory;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
    {
        std::ofstream echo(dir / "config.resolved.ini");
        echo << format_config(config);
    }

    std::vector<PhaseTiming> timings;
    auto start = std::chrono::steady_clock::now();
    const Discretization disc =
        Discretization::build(generate_mesh(sim.surface, sim.resolution), sim.surface, sim.curvature);
    timings.push_back({"mesh", seconds_since(start)});
    const MeshStatistics stats = mesh_statistics(disc.complex, disc.dual);
    print_mesh_statistics(std::cout, stats);

    auto write_manifest = [&](const std::string& status) {
        std::ofstream m(dir / "manifest.json");
        m << manifest_json(config, stats, timings, status) << '\n';
    };

    std::ofstream csv_file(dir / "diagnostics.csv");
    if (!csv_file) throw ConfigError("cannot write " + (dir / "diagnostics.csv").string());
    CsvWriter csv(csv_file, sim.vortex_count);
    double output_seconds = 0.0;
    start = std::chrono::steady_clock::now();
    try {
        const auto result = run(sim, disc, [&](const SolverState& s, const DiagnosticsRecord& r, bool snapshot) {
            const auto t0 = std::chrono::steady_clock::now();
            csv.write(r);
            if (snapshot && config.output.write_vtk) {
                char name[64];
                std::snprintf(name, sizeof name, "snapshot_%06ld.vtk", s.step_index);
                write_vtk(dir / name, s, disc.complex, disc.dual);
            }
            output_seconds += seconds_since(t0);
        });
        timings.push_back({"solve", seconds_since(start) - output_seconds});
        timings.push_back({"output", output_seconds});
        write_manifest("ok");
        const auto& last = result.history.back();
        std::printf("t=%g E=%.10g E0=%.10g max div=%.3g steps=%ld\n", last.time, last.kinetic_energy,
                    result.history.front().kinetic_energy, last.divergence_residual, last.step_index);
    } catch (const Error& e) {
        csv_file.flush();
        timings.push_back({"solve", seconds_since(start) - output_seconds});
        write_manifest(std::string("failed: ") + e.what());
        throw;
    }
    return 0;
}

std::vector<int> parse_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw ConfigError("malformed integer list '" + text + "'");
        }
    }
    if (out.empty()) throw ConfigError("empty integer list");
    return out;
}

int cmd_convergence(const Overrides& o, const std::string& levels) {
    RunConfig config = o.config.empty() ? RunConfig{sphere_benchmark_config(), {}} : resolve(o);
    SimulationConfig& sim = config.simulation;
    if (o.re) sim.reynolds = *o.re;
    if (o.tau) sim.tau = *o.tau;
    if (o.t_end) sim.t_end = *o.t_end;
    sim.validate();
    const auto frequencies = parse_list(levels);
    std::printf("sphere Killing field, Re=%g tau=%g t=%g\n", sim.reynolds, sim.tau, sim.t_end);
    const auto rows = sphere_convergence(frequencies, sim, [](const ConvergenceRow& r) {
        std::fprintf(stderr, "frequency %d done (%.1f s)\n", r.frequency, r.seconds);
    });
    print_convergence_table(std::cout, rows);
    if (!o.out.empty()) {
        fs::create_directories(o.out);
        std::ofstream csv(fs::path(o.out) / "convergence.csv");
        csv << "frequency,vertices,h,error,eoc\n";
        for (const auto& r : rows) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", r.frequency, r.vertices, r.h, r.error, r.eoc);
            csv << buf;
        }
    }
    return 0;
}

int cmd_flatfd(const std::string& sizes, const std::string& out) {
    const auto start = std::chrono::steady_clock::now();
    const auto rows = flatfd::consistency_study(parse_list(sizes));
    std::printf("%-18s %-10s %6s %12s %8s\n", "field", "stencil", "n", "error", "EOC");
    for (const auto& r : rows) {
        std::printf("%-18s %-10s %6d %12.4e %8s\n", r.field.c_str(), flatfd::to_string(r.stencil).c_str(), r.n,
                    r.error, std::isnan(r.eoc) ? "-" : std::to_string(r.eoc).substr(0, 6).c_str());
    }
    std::printf("elapsed %.3f s\n", seconds_since(start));
    if (!out.empty()) {
        fs::create_directories(out);
        std::ofstream csv(fs::path(out) / "flatfd.csv");
        flatfd::write_study_csv(csv, rows);
    }
    return 0;
}

int cmd_mesh_info(const Overrides& o, const std::string& surface) {
    RunConfig config;
    if (!surface.empty() && o.mesh.empty()) {
        config = parse_config("surface = " + surface + "\n");
        if (o.resolution) config.simulation.resolution = *o.resolution;
        config.simulation.validate();
    } else {
        config = resolve(o);
    }
    const auto& sim = config.simulation;
    const auto cx = generate_mesh(sim.surface, sim.resolution);
    const auto dual = circumcentric_dual(cx);
    print_mesh_statistics(std::cout, mesh_statistics(cx, dual));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Incompressible surface Navier-Stokes solver (discrete exterior calculus)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version());

    Overrides run_opts, conv_opts, info_opts;
    auto* run_cmd = app.add_subcommand("run", "Integrate one configuration");
    add_common_flags(run_cmd, run_opts);

    std::string levels = "14,23,32,49";
    auto* conv_cmd = app.add_subcommand("convergence", "Sphere Killing-field energy error and EOC table");
    add_common_flags(conv_cmd, conv_opts);
    conv_cmd->add_option("--levels", levels, "Comma-separated geodesic frequencies")->capture_default_str();

    std::string sizes = "16,32,64,128", flat_out;
    auto* flat_cmd = app.add_subcommand("flatfd-study", "Staggered-grid stencil consistency study");
    flat_cmd->add_option("--n", sizes, "Comma-separated grid sizes")->capture_default_str();
    flat_cmd->add_option("--out", flat_out, "Output directory for flatfd.csv");

    std::string surface;
    auto* info_cmd = app.add_subcommand("mesh-info", "Mesh statistics and well-centeredness");
    add_common_flags(info_cmd, info_opts);
    info_cmd->add_option("--surface", surface, "sphere | ellipsoid | biconcave | torus");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(Error::Category::Config);
    }

    try {
        if (*run_cmd) return cmd_run(run_opts);
        if (*conv_cmd) return cmd_convergence(conv_opts, levels);
        if (*flat_cmd) return cmd_flatfd(sizes, flat_out);
        if (*info_cmd) return cmd_mesh_info(info_opts, surface);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(Error::Category::Config);
    }
    return 0;
}
