#pragma once

#include "decflow/curvature.hpp"
#include "decflow/diagnostics.hpp"
#include "decflow/forms.hpp"
#include "decflow/linear_solver.hpp"
#include "decflow/mesh.hpp"
#include "decflow/state.hpp"
#include "decflow/surfaces.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace decflow {

enum class CurvatureChoice { Auto, Analytic, AngleDefect };

std::string to_string(CurvatureChoice choice);
CurvatureChoice curvature_choice_from_string(const std::string& name);

struct SimulationConfig {
    SurfaceDescriptor surface;
    /// Geodesic frequency for sphere-based shapes, n_theta for the torus.
    /// Ignored for external meshes.
    int resolution = 8;
    double reynolds = 10.0;
    double tau = 0.1;
    double t_end = 10.0;
    InitialCondition initial;
    /// Snapshot every this many steps; the initial and final states are
    /// always kept. 0 keeps only those two.
    int output_every = 0;
    Index gauge_vertex = 0;
    LinearSolverSettings linear_solver;
    CurvatureChoice curvature = CurvatureChoice::Auto;
    int vortex_count = 2;

    /// Throws ConfigError when Re <= 0, tau <= 0, t_end < 0 or other fields
    /// are out of range.
    void validate() const;
    long num_steps() const;
};

/// Row and column blocks of the coupled system. Columns: u, ⋆u, q, p.
/// Rows: edge momentum, edge Hodge, vertex pressure relation, vertex
/// divergence (with the gauge row in place of divergence row v0).
struct SystemLayout {
    Index num_edges = 0;
    Index num_vertices = 0;

    Index u_col() const { return 0; }
    Index u_dual_col() const { return num_edges; }
    Index q_col() const { return 2 * num_edges; }
    Index p_col() const { return 2 * num_edges + num_vertices; }

    Index momentum_row() const { return 0; }
    Index hodge_row() const { return num_edges; }
    Index pressure_row() const { return 2 * num_edges; }
    Index divergence_row() const { return 2 * num_edges + num_vertices; }

    Index dimension() const { return 2 * (num_edges + num_vertices); }
};

struct SparseSystem {
    SparseMatrix matrix;
    Eigen::VectorXd rhs;
    SystemLayout layout;
    Index gauge_vertex = 0;
};

/// Mesh, dual, operator matrices and curvature of one run.
struct Discretization {
    SimplicialComplex complex;
    DualGeometry dual;
    DecOperators operators;
    CurvatureField kappa;

    static Discretization build(SimplicialComplex complex, const SurfaceDescriptor& surface,
                                CurvatureChoice curvature);
};

/// Analytic curvature when the surface has a closed form, otherwise angle
/// defects.
CurvatureField select_curvature(const SurfaceDescriptor& surface, const SimplicialComplex& complex,
                                const DualGeometry& dual, CurvatureChoice choice);

/// Assembles the linear system for u_{k+1}, ⋆u_{k+1}, q_{k+1}, p_{k+1}. The
/// sparsity pattern depends only on the mesh and gauge vertex, so the
/// symbolic factorisation can be reused between steps.
SparseSystem assemble_system(const SolverState& state, const SimplicialComplex& complex, const DualGeometry& dual,
                             const CurvatureField& kappa, const SimulationConfig& config);
SparseSystem assemble_system(const SolverState& state, const Discretization& disc, const SimulationConfig& config);

/// Solves the assembled system; see SparseSolver for the residual contract.
Eigen::VectorXd solve_sparse(const SparseSystem& system, const LinearSolverSettings& settings);

/// Splits a solution vector into a state and checks the invariants:
/// divergence within 10x the solver tolerance and a vanishing gauge value.
SolverState unpack_solution(const Eigen::VectorXd& x, const SystemLayout& layout, const Discretization& disc,
                            const SimulationConfig& config, double time, long step_index, double solver_residual);

/// One time step with a fresh solver.
SolverState step(const SolverState& state, const SimplicialComplex& complex, const DualGeometry& dual,
                 const CurvatureField& kappa, const SimulationConfig& config);

/// Time stepper that reuses operators and the symbolic factorisation.
class Stepper {
public:
    Stepper(const Discretization& disc, const SimulationConfig& config);
    ~Stepper();
    Stepper(const Stepper&) = delete;
    Stepper& operator=(const Stepper&) = delete;

    SolverState step(const SolverState& state);

private:
    struct Context;
    const Discretization& disc_;
    SimulationConfig config_;
    SparseSolver solver_;
    std::unique_ptr<Context> context_;
};

/// u0 = sample of the initial field, ⋆u0 = ⊛u0, p0 = q0 = 0.
SolverState initial_state(const SimulationConfig& config, const Discretization& disc);

struct RunResult {
    std::vector<SolverState> snapshots;
    std::vector<DiagnosticsRecord> history;
};

/// Called after every accepted state (including the initial one) with its
/// diagnostics; `snapshot` marks states kept at the output cadence.
using RunObserver = std::function<void(const SolverState& state, const DiagnosticsRecord& record, bool snapshot)>;

/// Integrates from the initial condition to t_end on a prepared mesh.
RunResult run(const SimulationConfig& config, const Discretization& disc, const RunObserver& observer = {});

/// Builds the mesh of `config` and integrates.
RunResult run(const SimulationConfig& config, const RunObserver& observer = {});

/// Worker count for assembly: DECFLOW_THREADS if set and positive, else 1.
int worker_threads();

} // namespace decflow
