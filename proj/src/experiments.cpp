#include "decflow/experiments.hpp"

#include "decflow/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

namespace decflow {

SimulationConfig sphere_benchmark_config() {
    SimulationConfig c;
    c.surface = SurfaceDescriptor::sphere();
    c.initial = InitialCondition::killing_sphere();
    c.reynolds = 10.0;
    c.tau = 0.1;
    c.t_end = 10.0;
    return c;
}

int sphere_frequency_for_mesh_size(double h) {
    // h falls like 1/frequency; search the neighbourhood of the estimate.
    const int guess = std::max(1, static_cast<int>(std::lround(1.53 / h)));
    int best = guess;
    double best_err = std::numeric_limits<double>::infinity();
    for (int f = std::max(1, guess - 2); f <= guess + 2; ++f) {
        const auto cx = generate_mesh(SurfaceDescriptor::sphere(), f);
        const double err = std::abs(circumcentric_dual(cx).mesh_size() - h);
        if (err < best_err) {
            best_err = err;
            best = f;
        }
    }
    return best;
}

std::vector<ConvergenceRow> sphere_convergence(const std::vector<int>& frequencies, const SimulationConfig& base,
                                               const std::function<void(const ConvergenceRow&)>& progress) {
    if (frequencies.empty()) throw ConfigError("convergence study needs at least one resolution");
    if (base.surface.kind != SurfaceKind::Sphere || base.initial.kind != InitialCondition::Kind::KillingSphere) {
        throw ConfigError("convergence study runs the Killing field on the sphere");
    }
    const double radius = base.surface.radius;
    const double exact = 4.0 * std::numbers::pi * std::pow(radius, 4) / 3.0;

    std::vector<ConvergenceRow> rows;
    for (int f : frequencies) {
        const auto start = std::chrono::steady_clock::now();
        SimulationConfig config = base;
        config.resolution = f;
        config.output_every = 0;
        const Discretization disc =
            Discretization::build(generate_mesh(config.surface, f), config.surface, config.curvature);
        ConvergenceRow row;
        const auto result = run(config, disc, [&](const SolverState& s, const DiagnosticsRecord& r, bool) {
            if (s.step_index == 0) return;
            row.max_divergence = std::max(row.max_divergence, r.divergence_residual);
            row.max_gauge_pressure = std::max(row.max_gauge_pressure, std::abs(s.p.values()[config.gauge_vertex]));
        });
        row.frequency = f;
        row.vertices = disc.complex.num_vertices();
        row.h = disc.dual.mesh_size();
        row.initial_energy = result.history.front().kinetic_energy;
        row.final_energy = result.history.back().kinetic_energy;
        row.error = std::abs(exact - row.final_energy);
        row.eoc = std::numeric_limits<double>::quiet_NaN();
        if (!rows.empty()) row.eoc = eoc_table({rows.back().error, row.error}, {rows.back().h, row.h}).front();
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rows.push_back(row);
        if (progress) progress(row);
    }
    return rows;
}

void print_convergence_table(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%10s %8s %8s %14s %8s %8s\n", "frequency", "V", "h", "|E0-E(T)|", "EOC", "time[s]");
    os << buf;
    for (const auto& r : rows) {
        if (std::isnan(r.eoc)) {
            std::snprintf(buf, sizeof buf, "%10d %8d %8.4f %14.6g %8s %8.1f\n", r.frequency, r.vertices, r.h, r.error,
                          "-", r.seconds);
        } else {
            std::snprintf(buf, sizeof buf, "%10d %8d %8.4f %14.6g %8.3f %8.1f\n", r.frequency, r.vertices, r.h,
                          r.error, r.eoc, r.seconds);
        }
        os << buf;
    }
}

double plateau_time(const std::vector<DiagnosticsRecord>& history, double fraction) {
    if (history.size() < 2) return std::numeric_limits<double>::infinity();
    auto slope = [&](std::size_t k) {
        return std::abs(history[k].kinetic_energy - history[k - 1].kinetic_energy) /
               (history[k].time - history[k - 1].time);
    };
    const double initial = slope(1);
    for (std::size_t k = 1; k < history.size(); ++k) {
        if (slope(k) <= fraction * initial) return history[k].time;
    }
    return std::numeric_limits<double>::infinity();
}

double max_energy_increase(const std::vector<DiagnosticsRecord>& history) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < history.size(); ++k) {
        worst = std::max(worst, history[k].kinetic_energy - history[k - 1].kinetic_energy);
    }
    return worst;
}

HarmonicResidual torus_harmonic_residual(const SurfaceDescriptor& torus, int n_theta) {
    if (torus.kind != SurfaceKind::Torus) throw ConfigError("harmonic residuals need the torus");
    const auto cx = generate_mesh(torus, n_theta);
    const auto dual = circumcentric_dual(cx);
    const double R = torus.major_radius;
    auto residuals = [&](const VectorField& field, double& div, double& curl) {
        const Form1 u = sample_one_form(field, cx, dual);
        div = divergence_vertex(u, cx, dual).values().lpNorm<Eigen::Infinity>();
        curl = curl_edge_midpoint(u, cx, dual).lpNorm<Eigen::Infinity>();
    };
    HarmonicResidual r;
    r.n_theta = n_theta;
    r.h = dual.mesh_size();
    residuals([&](const Vec3& x) { return torus_harmonic_phi(torus.project(x)); }, r.divergence_phi, r.curl_phi);
    residuals([&](const Vec3& x) { return torus_harmonic_theta(torus.project(x), R); }, r.divergence_theta,
              r.curl_theta);
    return r;
}

std::vector<Index> curvature_maxima(const SimplicialComplex& complex, const CurvatureField& kappa, double fraction) {
    const auto& k = kappa.vertex_kappa;
    double global = -std::numeric_limits<double>::infinity();
    for (double v : k) global = std::max(global, v);
    std::vector<Index> maxima;
    for (Index v = 0; v < complex.num_vertices(); ++v) {
        if (k[v] < fraction * global) continue;
        bool is_max = true;
        for (Index e : complex.vertex_edges(v)) {
            const auto& ends = complex.edge(e);
            const Index w = ends[0] == v ? ends[1] : ends[0];
            if (k[w] > k[v]) is_max = false;
        }
        if (is_max) maxima.push_back(v);
    }
    return maxima;
}

} // namespace decflow
