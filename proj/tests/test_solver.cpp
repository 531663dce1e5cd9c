#include "decflow/error.hpp"
#include "decflow/solver.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

using namespace decflow;

namespace {

SimulationConfig sphere_config(int resolution, double t_end) {
    SimulationConfig c;
    c.surface = SurfaceDescriptor::sphere();
    c.initial = InitialCondition::killing_sphere();
    c.resolution = resolution;
    c.t_end = t_end;
    return c;
}

double energy(const SolverState& s, const Discretization& disc) { return kinetic_energy(s, disc.complex, disc.dual); }

} // namespace

TEST_CASE("system layout and dimension") {
    auto config = sphere_config(1, 0.1);
    const auto disc = Discretization::build(generate_mesh(config.surface, 1), config.surface, config.curvature);
    const auto state = initial_state(config, disc);
    const auto sys = assemble_system(state, disc, config);
    CHECK(sys.layout.dimension() == 84);
    CHECK(sys.matrix.rows() == 84);
    CHECK(sys.matrix.cols() == 84);
    CHECK(sys.rhs.size() == 84);
    CHECK(sys.layout.p_col() == 72);

    // Gauge row: unit entry on p(v0), zero right-hand side.
    const Index row = sys.layout.divergence_row() + sys.gauge_vertex;
    double row_sum = 0.0;
    for (int k = 0; k < sys.matrix.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(sys.matrix, k); it; ++it) {
            if (it.row() != row) continue;
            CHECK(it.col() == sys.layout.p_col() + sys.gauge_vertex);
            row_sum += it.value();
        }
    }
    CHECK(row_sum == 1.0);
    CHECK(sys.rhs[row] == 0.0);
}

TEST_CASE("zero initial data stays exactly zero") {
    auto config = sphere_config(4, 10.0);
    config.initial = InitialCondition::zero();
    const auto result = run(config);
    REQUIRE(result.history.size() == 101);
    for (const auto& r : result.history) {
        CHECK(r.kinetic_energy == 0.0);
        CHECK(r.divergence_residual == 0.0);
    }
    const auto& last = result.snapshots.back();
    CHECK(last.u.values().lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(last.p.values().lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(last.q.values().lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("accepted steps satisfy the constraints") {
    auto config = sphere_config(6, 1.0);
    config.gauge_vertex = 5;
    const auto disc = Discretization::build(generate_mesh(config.surface, 6), config.surface, config.curvature);
    Stepper stepper(disc, config);
    SolverState s = initial_state(config, disc);
    for (int k = 0; k < 10; ++k) {
        s = stepper.step(s);
        CHECK(s.p.values()[5] == 0.0);
        CHECK(s.divergence_residual <= 10 * config.linear_solver.tolerance);
        CHECK(s.solver_residual <= config.linear_solver.tolerance);
        CHECK(s.step_index == k + 1);
        CHECK(s.time == doctest::Approx(0.1 * (k + 1)));
    }
}

TEST_CASE("Killing field energy drift shrinks under refinement") {
    std::vector<double> drift;
    for (int f : {6, 12}) {
        auto config = sphere_config(f, 0.1);
        const auto disc = Discretization::build(generate_mesh(config.surface, f), config.surface, config.curvature);
        const auto s0 = initial_state(config, disc);
        const auto s1 = step(s0, disc.complex, disc.dual, disc.kappa, config);
        drift.push_back(std::abs(energy(s1, disc) - energy(s0, disc)) / energy(s0, disc));
    }
    CHECK(drift[0] < 0.05);
    CHECK(drift[1] < drift[0] / 3.0);
}

TEST_CASE("torus theta harmonic field loses energy") {
    SimulationConfig config;
    config.surface = SurfaceDescriptor::torus();
    config.initial = InitialCondition::harmonic_torus(0.0, 1.0);
    config.resolution = 16;
    config.t_end = 1.0;
    const auto result = run(config);
    for (std::size_t k = 1; k < result.history.size(); ++k) {
        CHECK(result.history[k].kinetic_energy < result.history[k - 1].kinetic_energy);
    }
}

TEST_CASE("sparse solve") {
    SparseMatrix eye(5, 5);
    eye.setIdentity();
    Eigen::VectorXd rhs(5);
    rhs << 1, 2, 3, 4, 5;
    for (auto backend : {LinearSolverSettings::Backend::Umfpack, LinearSolverSettings::Backend::SparseLU,
                         LinearSolverSettings::Backend::BiCGSTAB}) {
        LinearSolverSettings settings;
        settings.backend = backend;
        const auto r = solve_sparse(eye, rhs, settings);
        CHECK((r.solution - rhs).lpNorm<Eigen::Infinity>() < 1e-14);
        CHECK(r.relative_residual < 1e-14);
    }
    SparseMatrix singular = eye;
    singular.coeffRef(2, 2) = 0.0;
    singular.prune(0.0);
    for (auto backend : {LinearSolverSettings::Backend::Umfpack, LinearSolverSettings::Backend::SparseLU}) {
        LinearSolverSettings settings;
        settings.backend = backend;
        CHECK_THROWS_AS(solve_sparse(singular, rhs, settings), SolverError);
    }
    CHECK(linear_backend_from_string("sparselu") == LinearSolverSettings::Backend::SparseLU);
    CHECK_THROWS_AS(linear_backend_from_string("cholesky"), ConfigError);
}

TEST_CASE("a missing gauge row makes the system singular") {
    auto config = sphere_config(2, 0.1);
    const auto disc = Discretization::build(generate_mesh(config.surface, 2), config.surface, config.curvature);
    auto sys = assemble_system(initial_state(config, disc), disc, config);
    const Index row = sys.layout.divergence_row() + sys.gauge_vertex;
    for (int k = 0; k < sys.matrix.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(sys.matrix, k); it; ++it) {
            if (it.row() == row) it.valueRef() = 0.0;
        }
    }
    sys.matrix.prune(0.0);
    CHECK_THROWS_AS(solve_sparse(sys, config.linear_solver), SolverError);
}

TEST_CASE("direct backends agree") {
    auto config = sphere_config(5, 0.3);
    config.initial = InitialCondition::stream_curl(Vec3(0, 1, 0.3));
    config.linear_solver.backend = LinearSolverSettings::Backend::Umfpack;
    const auto a = run(config).snapshots.back();
    config.linear_solver.backend = LinearSolverSettings::Backend::SparseLU;
    const auto b = run(config).snapshots.back();
    CHECK((a.u.values() - b.u.values()).lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK((a.p.values() - b.p.values()).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("config validation") {
    auto config = sphere_config(4, 1.0);
    CHECK_NOTHROW(config.validate());
    CHECK(config.num_steps() == 10);
    auto bad = config;
    bad.reynolds = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = config;
    bad.tau = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = config;
    bad.t_end = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = config;
    bad.gauge_vertex = -1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = config;
    bad.gauge_vertex = 100000;
    CHECK_THROWS_AS(run(bad), ConfigError);

    config.t_end = 0.0;
    const auto result = run(config);
    CHECK(result.snapshots.size() == 1);
    CHECK(result.history.size() == 1);
}

TEST_CASE("output cadence") {
    auto config = sphere_config(3, 1.0);
    config.output_every = 3;
    const auto result = run(config);
    CHECK(result.history.size() == 11);
    std::vector<long> steps;
    for (const auto& s : result.snapshots) steps.push_back(s.step_index);
    CHECK(steps == std::vector<long>{0, 3, 6, 9, 10});
}

TEST_CASE("runs are deterministic across thread counts") {
    auto config = sphere_config(6, 0.5);
    config.initial = InitialCondition::stream_curl(Vec3(0.2, 1, 0.3));
    ::setenv("DECFLOW_THREADS", "1", 1);
    CHECK(worker_threads() == 1);
    const auto a = run(config);
    ::setenv("DECFLOW_THREADS", "3", 1);
    CHECK(worker_threads() == 3);
    const auto b = run(config);
    ::unsetenv("DECFLOW_THREADS");
    CHECK(worker_threads() == 1);
    CHECK(a.snapshots.back().u.values() == b.snapshots.back().u.values());
    for (std::size_t k = 0; k < a.history.size(); ++k) {
        CHECK(a.history[k].kinetic_energy == b.history[k].kinetic_energy);
    }
}

TEST_CASE("curvature selection") {
    const auto bic = SurfaceDescriptor::biconcave();
    const auto cx = generate_mesh(bic, 4);
    const auto dual = circumcentric_dual(cx);
    CHECK(select_curvature(bic, cx, dual, CurvatureChoice::Auto).source == CurvatureSource::AngleDefect);
    CHECK_THROWS_AS(select_curvature(bic, cx, dual, CurvatureChoice::Analytic), ConfigError);
    const auto sphere = SurfaceDescriptor::sphere();
    const auto scx = generate_mesh(sphere, 4);
    const auto sdual = circumcentric_dual(scx);
    CHECK(select_curvature(sphere, scx, sdual, CurvatureChoice::Auto).source == CurvatureSource::Analytic);
    CHECK(select_curvature(sphere, scx, sdual, CurvatureChoice::AngleDefect).source == CurvatureSource::AngleDefect);
    CHECK(curvature_choice_from_string("angle_defect") == CurvatureChoice::AngleDefect);
}
