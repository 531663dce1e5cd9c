#include "decflow/solver.hpp"

#include "decflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace decflow {

namespace {

using RowMajor = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplets = std::vector<Eigen::Triplet<double>>;

template <class Fn>
void for_each_entry(const RowMajor& m, Index row, Fn&& fn) {
    for (RowMajor::InnerIterator it(m, row); it; ++it) fn(static_cast<Index>(it.col()), it.value());
}

// Splits [0, n) into contiguous chunks, fills one triplet list per chunk and
// concatenates them in chunk order, so the result does not depend on the
// number of workers.
template <class Fn>
Triplets parallel_triplets(Index n, Fn&& fill) {
    const int workers = std::max(1, std::min<int>(worker_threads(), n / 1024 + 1));
    std::vector<Triplets> parts(workers);
    auto work = [&](int w) {
        const Index begin = static_cast<Index>(static_cast<long>(n) * w / workers);
        const Index end = static_cast<Index>(static_cast<long>(n) * (w + 1) / workers);
        for (Index i = begin; i < end; ++i) fill(i, parts[w]);
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
        for (auto& t : threads) t.join();
    }
    Triplets all;
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    all.reserve(total);
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    return all;
}

bool has_closed_form_curvature(const SurfaceDescriptor& s) {
    return s.kind == SurfaceKind::Sphere || s.kind == SurfaceKind::Ellipsoid || s.kind == SurfaceKind::Torus;
}

// Row-major operator copies and per-step data for assembly.
struct AssemblyContext {
    const Discretization& disc;
    RowMajor laplace, curl, hodge, divergence;

    explicit AssemblyContext(const Discretization& d)
        : disc(d), laplace(d.operators.laplace_rr), curl(d.operators.curl), hodge(d.operators.hodge),
          divergence(d.operators.divergence) {}
};

SparseSystem assemble(const SolverState& state, const AssemblyContext& ctx, const SimulationConfig& config) {
    const auto& cx = ctx.disc.complex;
    const auto& dual = ctx.disc.dual;
    const auto& kappa = ctx.disc.kappa;
    const Index E = cx.num_edges(), V = cx.num_vertices();

    if (state.u.size() != E || state.u_dual.size() != E || state.q.size() != V || state.p.size() != V) {
        throw SolverError("state does not match the mesh");
    }
    if (!state.all_finite()) throw SolverError("state contains NaN/Inf");
    if (config.gauge_vertex < 0 || config.gauge_vertex >= V) throw ConfigError("gauge vertex out of range");

    SparseSystem sys;
    sys.layout = {E, V};
    sys.gauge_vertex = config.gauge_vertex;
    const auto& L = sys.layout;
    sys.rhs = Eigen::VectorXd::Zero(L.dimension());

    const Eigen::VectorXd& uk = state.u.values();
    const Eigen::VectorXd& wk = state.u_dual.values();
    const Eigen::VectorXd div_wk = ctx.divergence * wk;
    const Eigen::VectorXd curl_uk = ctx.curl * uk;
    const double inv_tau = 1.0 / config.tau;
    const double inv_re = 1.0 / config.reynolds;

    // Items [0, E) are edges, [E, E+V) vertices.
    Triplets triplets = parallel_triplets(E + V, [&](Index item, Triplets& t) {
        if (item < E) {
            const Index e = item;
            const Index row = L.momentum_row() + e;
            const auto& ends = cx.edge(e);
            // Zeros are kept so the pattern stays the same for every state.
            for_each_entry(ctx.laplace, e, [&](Index c, double v) { t.emplace_back(row, L.u_col() + c, -inv_re * v); });
            for_each_entry(ctx.curl, e, [&](Index c, double v) { t.emplace_back(row, L.u_col() + c, wk[e] * v); });
            t.emplace_back(row, L.u_col() + e, inv_tau - 2.0 * inv_re * kappa.edge_kappa[e]);
            t.emplace_back(row, L.u_dual_col() + e, -0.5 * (div_wk[ends[0]] + div_wk[ends[1]]));
            t.emplace_back(row, L.q_col() + ends[1], 1.0);
            t.emplace_back(row, L.q_col() + ends[0], -1.0);
            sys.rhs[row] = inv_tau * uk[e] + curl_uk[e] * wk[e];

            const Index hrow = L.hodge_row() + e;
            for_each_entry(ctx.hodge, e, [&](Index c, double v) { t.emplace_back(hrow, L.u_col() + c, v); });
            t.emplace_back(hrow, L.u_dual_col() + e, -1.0);
        } else {
            const Index v = item - E;
            const Index prow = L.pressure_row() + v;
            const double area = dual.voronoi_area[v];
            double norm2 = 0.0;
            for (Index e : cx.vertex_edges(v)) {
                const double c = dual.dual_edge_length[e] / (4.0 * dual.primal_edge_length[e] * area);
                t.emplace_back(prow, L.u_col() + e, c * uk[e]);
                t.emplace_back(prow, L.u_dual_col() + e, c * wk[e]);
                norm2 += c * (uk[e] * uk[e] + wk[e] * wk[e]);
            }
            t.emplace_back(prow, L.p_col() + v, 1.0);
            t.emplace_back(prow, L.q_col() + v, -1.0);
            sys.rhs[prow] = 0.5 * norm2;

            const Index drow = L.divergence_row() + v;
            if (v == config.gauge_vertex) {
                t.emplace_back(drow, L.p_col() + v, 1.0);
            } else {
                for_each_entry(ctx.divergence, v, [&](Index c, double val) { t.emplace_back(drow, L.u_col() + c, val); });
            }
        }
    });

    sys.matrix.resize(L.dimension(), L.dimension());
    sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
    sys.matrix.makeCompressed();
    return sys;
}

} // namespace

int worker_threads() {
    const char* env = std::getenv("DECFLOW_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) return 1;
    return static_cast<int>(std::min<long>(n, 256));
}

std::string to_string(CurvatureChoice choice) {
    switch (choice) {
    case CurvatureChoice::Auto: return "auto";
    case CurvatureChoice::Analytic: return "analytic";
    case CurvatureChoice::AngleDefect: return "angle_defect";
    }
    return "unknown";
}

CurvatureChoice curvature_choice_from_string(const std::string& name) {
    for (auto c : {CurvatureChoice::Auto, CurvatureChoice::Analytic, CurvatureChoice::AngleDefect}) {
        if (to_string(c) == name) return c;
    }
    throw ConfigError("unknown curvature source '" + name + "'");
}

void SimulationConfig::validate() const {
    surface.validate();
    if (!(reynolds > 0.0) || !std::isfinite(reynolds)) throw ConfigError("Re must be positive");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be positive");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be non-negative");
    if (output_every < 0) throw ConfigError("output cadence must be non-negative");
    if (gauge_vertex < 0) throw ConfigError("gauge vertex must be non-negative");
    if (vortex_count < 1) throw ConfigError("vortex count must be at least 1");
    if (surface.is_analytic() && resolution < 1) throw ConfigError("resolution must be positive");
    if (!(linear_solver.tolerance > 0.0)) throw ConfigError("linear solver tolerance must be positive");
    if (linear_solver.max_iterations < 1) throw ConfigError("iteration cap must be positive");
    if (curvature == CurvatureChoice::Analytic && !has_closed_form_curvature(surface)) {
        throw ConfigError("analytic curvature is not available for surface '" + to_string(surface.kind) + "'");
    }
    using K = InitialCondition::Kind;
    if (initial.kind == K::KillingSphere && surface.kind != SurfaceKind::Sphere) {
        throw ConfigError("initial condition 'killing_sphere' needs surface = sphere");
    }
    if (initial.kind == K::HarmonicTorus && surface.kind != SurfaceKind::Torus) {
        throw ConfigError("initial condition 'harmonic_torus' needs surface = torus");
    }
}

long SimulationConfig::num_steps() const {
    return static_cast<long>(std::ceil(t_end / tau - 1e-9));
}

CurvatureField select_curvature(const SurfaceDescriptor& surface, const SimplicialComplex& complex,
                                const DualGeometry& dual, CurvatureChoice choice) {
    if (choice == CurvatureChoice::AngleDefect ||
        (choice == CurvatureChoice::Auto && !has_closed_form_curvature(surface))) {
        return kappa_angle_defect(complex, dual);
    }
    return kappa_analytic(surface, complex, dual);
}

Discretization Discretization::build(SimplicialComplex complex, const SurfaceDescriptor& surface,
                                     CurvatureChoice curvature) {
    Discretization d{std::move(complex), {}, {}, {}};
    d.dual = circumcentric_dual(d.complex);
    d.operators = DecOperators::build(d.complex, d.dual);
    d.kappa = select_curvature(surface, d.complex, d.dual, curvature);
    return d;
}

SparseSystem assemble_system(const SolverState& state, const Discretization& disc, const SimulationConfig& config) {
    return assemble(state, AssemblyContext(disc), config);
}

SparseSystem assemble_system(const SolverState& state, const SimplicialComplex& complex, const DualGeometry& dual,
                             const CurvatureField& kappa, const SimulationConfig& config) {
    const Discretization disc{complex, dual, DecOperators::build(complex, dual), kappa};
    return assemble_system(state, disc, config);
}

Eigen::VectorXd solve_sparse(const SparseSystem& system, const LinearSolverSettings& settings) {
    return solve_sparse(system.matrix, system.rhs, settings).solution;
}

SolverState unpack_solution(const Eigen::VectorXd& x, const SystemLayout& layout, const Discretization& disc,
                            const SimulationConfig& config, double time, long step_index, double solver_residual) {
    const Index E = layout.num_edges, V = layout.num_vertices;
    if (x.size() != layout.dimension()) throw SolverError("solution vector has the wrong size");
    SolverState s{Form1(x.segment(layout.u_col(), E)), Form1(x.segment(layout.u_dual_col(), E)),
                  Form0(x.segment(layout.q_col(), V)), Form0(x.segment(layout.p_col(), V))};
    s.time = time;
    s.step_index = step_index;
    s.solver_residual = solver_residual;
    if (!s.all_finite()) throw SolverError("solution contains NaN/Inf");

    const double limit = 10.0 * config.linear_solver.tolerance;
    s.divergence_residual = (disc.operators.divergence * s.u.values()).lpNorm<Eigen::Infinity>();
    if (!(s.divergence_residual <= limit)) {
        std::ostringstream msg;
        msg << "divergence residual " << s.divergence_residual << " exceeds " << limit << " at step " << step_index;
        throw SolverError(msg.str());
    }
    const Index v0 = config.gauge_vertex;
    const double gauge_scale = std::max(1.0, s.p.values().lpNorm<Eigen::Infinity>());
    if (!(std::abs(s.p[v0]) <= limit * gauge_scale)) {
        std::ostringstream msg;
        msg << "gauge violated: p(v0) = " << s.p[v0] << " at step " << step_index;
        throw SolverError(msg.str());
    }
    s.p[v0] = 0.0;
    return s;
}

struct Stepper::Context : AssemblyContext {
    using AssemblyContext::AssemblyContext;
};

Stepper::Stepper(const Discretization& disc, const SimulationConfig& config)
    : disc_(disc), config_(config), solver_(config.linear_solver), context_(std::make_unique<Context>(disc)) {
    config_.validate();
}

Stepper::~Stepper() = default;

SolverState Stepper::step(const SolverState& state) {
    const SparseSystem sys = assemble(state, *context_, config_);
    const LinearSolveResult result = solver_.solve(sys.matrix, sys.rhs);
    const long k = state.step_index + 1;
    return unpack_solution(result.solution, sys.layout, disc_, config_, static_cast<double>(k) * config_.tau, k,
                           result.relative_residual);
}

SolverState step(const SolverState& state, const SimplicialComplex& complex, const DualGeometry& dual,
                 const CurvatureField& kappa, const SimulationConfig& config) {
    const Discretization disc{complex, dual, DecOperators::build(complex, dual), kappa};
    Stepper stepper(disc, config);
    return stepper.step(state);
}

SolverState initial_state(const SimulationConfig& config, const Discretization& disc) {
    const auto& cx = disc.complex;
    SolverState s = SolverState::zero(cx.num_edges(), cx.num_vertices());
    if (config.initial.kind == InitialCondition::Kind::StreamCurl && !config.surface.is_analytic()) {
        // No level set: use the mean normal of the two faces at each edge.
        for (Index e = 0; e < cx.num_edges(); ++e) {
            const auto& lr = cx.edge_faces(e);
            const Vec3 n = (disc.dual.face_normal[lr[0]] + disc.dual.face_normal[lr[1]]).normalized();
            s.u[e] = n.cross(config.initial.stream_gradient).dot(cx.edge_vector(e));
        }
    } else {
        s.u = sample_one_form(initial_velocity(config.initial, config.surface), cx, disc.dual);
    }
    s.u_dual = Form1(disc.operators.hodge * s.u.values());
    s.divergence_residual = (disc.operators.divergence * s.u.values()).lpNorm<Eigen::Infinity>();
    return s;
}

RunResult run(const SimulationConfig& config, const Discretization& disc, const RunObserver& observer) {
    config.validate();
    if (config.gauge_vertex >= disc.complex.num_vertices()) throw ConfigError("gauge vertex out of range");

    RunResult result;
    const long n = config.num_steps();
    auto record = [&](const SolverState& s) {
        const bool snapshot = s.step_index == 0 || s.step_index == n ||
                              (config.output_every > 0 && s.step_index % config.output_every == 0);
        result.history.push_back(compute_diagnostics(s, disc.complex, disc.dual, config.vortex_count));
        if (snapshot) result.snapshots.push_back(s);
        if (observer) observer(s, result.history.back(), snapshot);
    };

    SolverState state = initial_state(config, disc);
    record(state);
    Stepper stepper(disc, config);
    for (long k = 0; k < n; ++k) {
        state = stepper.step(state);
        record(state);
    }
    return result;
}

RunResult run(const SimulationConfig& config, const RunObserver& observer) {
    config.validate();
    const Discretization disc =
        Discretization::build(generate_mesh(config.surface, config.resolution), config.surface, config.curvature);
    return run(config, disc, observer);
}

} // namespace decflow
