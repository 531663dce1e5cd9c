#include "decflow/error.hpp"
#include "decflow/experiments.hpp"
#include "decflow/surfaces.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace decflow;

constexpr double pi = std::numbers::pi;

TEST_CASE("geodesic sphere") {
    const auto cx = generate_mesh(SurfaceDescriptor::sphere(), 1);
    CHECK(cx.num_vertices() == 12);
    CHECK(cx.num_edges() == 30);
    CHECK(cx.num_faces() == 20);
    for (int f : {2, 3, 7}) {
        const auto soup = geodesic_sphere(f, 2.0);
        CHECK(soup.positions.size() == static_cast<std::size_t>(10 * f * f + 2));
        CHECK(soup.triangles.size() == static_cast<std::size_t>(20 * f * f));
        for (const auto& p : soup.positions) CHECK(p.norm() == doctest::Approx(2.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(geodesic_sphere(0), Error);
}

TEST_CASE("torus grid") {
    for (int n : {8, 12, 16}) {
        const auto soup = torus_grid(2.0, 0.5, n, n);
        const auto cx = build_complex(soup.positions, soup.triangles);
        CHECK(cx.num_vertices() == n * n);
        CHECK(cx.num_edges() == 3 * n * n);
        CHECK(cx.num_faces() == 2 * n * n);
        CHECK(cx.euler_characteristic() == 0);
        const auto plain = torus_grid(2.0, 0.5, n, n, false);
        CHECK(build_complex(plain.positions, plain.triangles).euler_characteristic() == 0);
    }
    const auto t = SurfaceDescriptor::torus();
    const auto cx = generate_mesh(t, 16);
    CHECK(cx.num_vertices() == torus_phi_count(2.0, 0.5, 16) * 16);
    CHECK(well_centered_report(cx, circumcentric_dual(cx)).passed);
    for (const auto& p : cx.positions()) CHECK(std::abs(t.level_set(p)) < 1e-12);
}

TEST_CASE("catalog vertices lie on their level sets") {
    const auto bic = SurfaceDescriptor::biconcave();
    const auto bcx = generate_mesh(bic, 12);
    for (const auto& p : bcx.positions()) CHECK(std::abs(bic.level_set(p)) < 1e-10);
    const auto ell = SurfaceDescriptor::ellipsoid();
    const auto ecx = generate_mesh(ell, 12);
    for (const auto& p : ecx.positions()) CHECK(std::abs(ell.level_set(p)) < 1e-12);
}

TEST_CASE("catalog meshes have no negative dual edges") {
    for (const auto& s : {SurfaceDescriptor::sphere(), SurfaceDescriptor::ellipsoid(), SurfaceDescriptor::biconcave()}) {
        const auto cx = generate_mesh(s, 12);
        const auto dual = circumcentric_dual(cx);
        for (double l : dual.dual_edge_length) CHECK(l > -1e-12);
    }
}

TEST_CASE("descriptor validation") {
    CHECK_THROWS_AS(SurfaceDescriptor::sphere(-1.0).validate(), ConfigError);
    CHECK_THROWS_AS(SurfaceDescriptor::torus(0.5, 2.0).validate(), ConfigError);
    CHECK_THROWS_AS(SurfaceDescriptor::ellipsoid(0.5, 0.0, 1.0).validate(), ConfigError);
    CHECK_THROWS_AS(generate_mesh(SurfaceDescriptor::torus(), 4), MeshError);
    CHECK(surface_kind_from_string("biconcave") == SurfaceKind::Biconcave);
    CHECK_THROWS_AS(surface_kind_from_string("cube"), ConfigError);
}

TEST_CASE("initial velocity examples") {
    const auto sphere = SurfaceDescriptor::sphere();
    const auto k = initial_velocity(InitialCondition::killing_sphere(), sphere);
    CHECK((k(Vec3(0, 1, 0)) - Vec3(1, 0, 0)).norm() < 1e-15);
    // psi = z gives the same field.
    const auto psi_z = initial_velocity(InitialCondition::stream_curl(Vec3(0, 0, 1)), sphere);
    for (const Vec3& x : {Vec3(0, 1, 0), Vec3(0.6, 0, 0.8), Vec3(0.36, 0.48, 0.8)}) {
        CHECK((psi_z(x) - k(x)).norm() < 1e-14);
        CHECK(std::abs(k(x).dot(x)) < 1e-12);
    }

    const auto torus = SurfaceDescriptor::torus();
    CHECK((torus_harmonic_phi(Vec3(2.5, 0, 0)) - Vec3(0, 0, 0.1)).norm() < 1e-15);
    CHECK((torus_harmonic_theta(Vec3(2.5, 0, 0), 2.0) - Vec3(0, 0.1, 0)).norm() < 1e-15);
    CHECK((torus_d_theta(Vec3(2.5, 0, 0), 2.0) - Vec3(0, 0.5, 0)).norm() < 1e-15);
    CHECK((torus_d_phi(Vec3(2.5, 0, 0)) - Vec3(0, 0, 2.5)).norm() < 1e-15);
    const auto mean = initial_velocity(InitialCondition::harmonic_torus(0.5, 0.5), torus);
    CHECK((mean(Vec3(2.5, 0, 0)) - Vec3(0, 0.05, 0.05)).norm() < 1e-15);

    // Fields are evaluated at the surface projection; far points are rejected.
    CHECK((k(Vec3(0, 1.01, 0)) - Vec3(1, 0, 0)).norm() < 1e-12);
    CHECK_THROWS_AS(k(Vec3(0, 3, 0)), ConfigError);
    CHECK_THROWS_AS(initial_velocity(InitialCondition::killing_sphere(), torus), ConfigError);
    CHECK_THROWS_AS(initial_velocity(InitialCondition::harmonic_torus(1, 0), sphere), ConfigError);
}

TEST_CASE("stream function of d_phi x on the torus") {
    CHECK(stream_function_torus_phi(pi) == doctest::Approx(0.0).scale(1.0));
    CHECK(stream_function_torus_phi(pi / 2) == doctest::Approx(-0.25 - pi / 2));
    const double jump = stream_function_torus_phi(2 * pi - 1e-12) - stream_function_torus_phi(1e-12);
    CHECK(jump == doctest::Approx(2 * pi).epsilon(1e-9));
    CHECK(torus_theta(Vec3(2.5, 0, 0), 2.0) == doctest::Approx(0.0));
    CHECK(torus_theta(Vec3(0, 0, -1.5), 2.0) == doctest::Approx(pi));
    CHECK(stream_function_torus_phi(Vec3(0, 0.5, 2.0), 2.0) == doctest::Approx(-0.25 - pi / 2));
}

TEST_CASE("torus harmonic fields are divergence and curl free in the limit") {
    // The phi divergence and theta curl vanish by symmetry; they sit at round-off on every level.
    constexpr double roundoff = 1e-12;
    std::vector<HarmonicResidual> rows;
    for (int n : {16, 32, 64}) rows.push_back(torus_harmonic_residual(SurfaceDescriptor::torus(), n));
    auto order_ok = [](double coarse, double fine, double rate) {
        if (coarse <= roundoff && fine <= roundoff) return true;
        return std::log(coarse / fine) / rate >= 1.0;
    };
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double rate = std::log(rows[i - 1].h / rows[i].h);
        CHECK(order_ok(rows[i - 1].divergence_phi, rows[i].divergence_phi, rate));
        CHECK(order_ok(rows[i - 1].curl_phi, rows[i].curl_phi, rate));
        CHECK(order_ok(rows[i - 1].divergence_theta, rows[i].divergence_theta, rate));
        CHECK(order_ok(rows[i - 1].curl_theta, rows[i].curl_theta, rate));
    }
    CHECK(rows.back().curl_phi < 1e-3);
    CHECK(rows.back().divergence_theta < 1e-3);
}

TEST_CASE("stream-curl fields are tangential") {
    for (const auto& [s, psi] : {std::pair{SurfaceDescriptor::ellipsoid(), Vec3(0, 1, 0.1)},
                                 std::pair{SurfaceDescriptor::biconcave(), Vec3(0, 1, 1)}}) {
        const auto field = initial_velocity(InitialCondition::stream_curl(psi), s);
        const auto cx = generate_mesh(s, 8);
        for (const auto& p : cx.positions()) {
            const Vec3 n = s.normal(p);
            CHECK(std::abs(field(p).dot(n)) < 1e-12);
        }
    }
}
