#pragma once

#include "decflow/diagnostics.hpp"
#include "decflow/solver.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace decflow {

struct ConvergenceRow {
    int frequency = 0;
    Index vertices = 0;
    double h = 0.0;
    double initial_energy = 0.0;
    double final_energy = 0.0;
    /// |E0 - E(t_end)| with the exact E0 = 4 pi R^4 / 3.
    double error = 0.0;
    /// Against the previous row; NaN for the first.
    double eoc = 0.0;
    /// Largest divergence residual and |p(gauge)| over the accepted steps.
    double max_divergence = 0.0;
    double max_gauge_pressure = 0.0;
    double seconds = 0.0;
};

/// Killing field v0 = (y, -x, 0) on the sphere, integrated to t_end on
/// geodesic spheres of the given frequencies (increasing).
std::vector<ConvergenceRow> sphere_convergence(const std::vector<int>& frequencies, const SimulationConfig& base,
                                               const std::function<void(const ConvergenceRow&)>& progress = {});

/// Base config of the sphere benchmark: Re = 10, tau = 0.1, t_end = 10.
SimulationConfig sphere_benchmark_config();

/// Geodesic frequency whose mesh size is closest to h on the unit sphere.
int sphere_frequency_for_mesh_size(double h);

void print_convergence_table(std::ostream& os, const std::vector<ConvergenceRow>& rows);

/// First time at which |dE/dt| (per-step difference quotient) drops below
/// `fraction` times its value on the first step; infinity if never.
double plateau_time(const std::vector<DiagnosticsRecord>& history, double fraction = 0.01);

/// Largest per-step energy increase, E(t_{k+1}) - E(t_k), over a history.
double max_energy_increase(const std::vector<DiagnosticsRecord>& history);

struct HarmonicResidual {
    int n_theta = 0;
    double h = 0.0;
    double divergence_phi = 0.0, curl_phi = 0.0;
    double divergence_theta = 0.0, curl_theta = 0.0;
};

/// Max discrete divergence and curl of the sampled torus harmonic fields.
HarmonicResidual torus_harmonic_residual(const SurfaceDescriptor& torus, int n_theta);

/// Local maxima of the vertex curvature over the one-ring that reach at
/// least `fraction` of the global maximum.
std::vector<Index> curvature_maxima(const SimplicialComplex& complex, const CurvatureField& kappa,
                                    double fraction = 0.9);

} // namespace decflow
