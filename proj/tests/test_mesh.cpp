#include "decflow/error.hpp"
#include "decflow/mesh.hpp"
#include "decflow/mesh_io.hpp"
#include "decflow/surfaces.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace decflow;

namespace {

void check_closed_and_consistent(const SimplicialComplex& cx) {
    for (Index e = 0; e < cx.num_edges(); ++e) {
        const auto& ef = cx.edge_faces(e);
        REQUIRE(ef[0] >= 0);
        REQUIRE(ef[1] >= 0);
        CHECK(ef[0] != ef[1]);
        CHECK(sign_face_edge(cx, ef[0], e) + sign_face_edge(cx, ef[1], e) == 0);
        CHECK(cx.edge(e)[0] < cx.edge(e)[1]);
    }
    for (Index f = 0; f < cx.num_faces(); ++f) {
        const auto& vs = cx.face(f);
        for (int k = 0; k < 3; ++k) {
            const Index e = cx.face_edges(f)[k];
            const Index from = vs[k], to = vs[(k + 1) % 3];
            const bool forward = cx.edge(e)[0] == from && cx.edge(e)[1] == to;
            const bool backward = cx.edge(e)[0] == to && cx.edge(e)[1] == from;
            REQUIRE((forward || backward));
            CHECK(cx.face_edge_signs(f)[k] == (forward ? 1 : -1));
        }
    }
}

} // namespace

TEST_CASE("tetrahedron surface has six edges with two faces each") {
    const auto cx = fixtures::build(fixtures::tetrahedron());
    CHECK(cx.num_vertices() == 4);
    CHECK(cx.num_edges() == 6);
    CHECK(cx.num_faces() == 4);
    CHECK(cx.euler_characteristic() == 2);
    check_closed_and_consistent(cx);
}

TEST_CASE("icosahedron combinatorics") {
    const auto cx = fixtures::build(fixtures::icosahedron());
    CHECK(cx.num_vertices() == 12);
    CHECK(cx.num_edges() == 30);
    CHECK(cx.num_faces() == 20);
    check_closed_and_consistent(cx);
}

TEST_CASE("orientation is propagated from face 0") {
    auto soup = fixtures::tetrahedron();
    // Flip three of the four faces; the builder must re-orient them.
    for (std::size_t f = 1; f < soup.triangles.size(); ++f) std::swap(soup.triangles[f][1], soup.triangles[f][2]);
    const auto cx = fixtures::build(soup);
    CHECK(cx.face(0) == soup.triangles[0]);
    check_closed_and_consistent(cx);
}

TEST_CASE("invalid inputs are rejected with MeshError") {
    SUBCASE("open strip has boundary edges") {
        const std::vector<Vec3> p{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)};
        const std::vector<std::array<Index, 3>> t{{0, 1, 2}, {0, 2, 3}};
        CHECK_THROWS_AS(build_complex(p, t), MeshError);
    }
    SUBCASE("edge with three faces") {
        auto soup = fixtures::tetrahedron();
        soup.positions.push_back(Vec3(0, 0, 3));
        soup.triangles.push_back({0, 1, 4});
        CHECK_THROWS_AS(build_complex(soup.positions, soup.triangles), MeshError);
    }
    SUBCASE("degenerate triangle") {
        auto soup = fixtures::tetrahedron();
        soup.positions[3] = 0.5 * (soup.positions[0] + soup.positions[1]);
        soup.positions[2] = soup.positions[0] + 2.0 * (soup.positions[1] - soup.positions[0]);
        CHECK_THROWS_AS(build_complex(soup.positions, soup.triangles), MeshError);
    }
    SUBCASE("index out of range") {
        auto soup = fixtures::tetrahedron();
        soup.triangles[0][0] = 7;
        CHECK_THROWS_AS(build_complex(soup.positions, soup.triangles), MeshError);
    }
    SUBCASE("projective plane is not orientable") {
        std::vector<Vec3> p;
        for (int k = 0; k < 6; ++k) {
            const double a = 2.0 * std::numbers::pi * k / 6.0;
            p.emplace_back(std::cos(a), std::sin(a), 0.3 * (k % 2) + 0.1 * k);
        }
        const std::vector<std::array<Index, 3>> t{{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 1},
                                                  {1, 2, 4}, {2, 3, 5}, {3, 4, 1}, {4, 5, 2}, {5, 1, 3}};
        CHECK_THROWS_AS(build_complex(p, t), MeshError);
    }
}

TEST_CASE("sign functions") {
    const auto cx = fixtures::build(fixtures::tetrahedron());
    for (Index e = 0; e < cx.num_edges(); ++e) {
        const auto [tail, head] = cx.edge(e);
        CHECK(sign_vertex_edge(cx, head, e) == 1);
        CHECK(sign_vertex_edge(cx, tail, e) == -1);
        const auto [left, right] = cx.edge_faces(e);
        CHECK(sign_face_edge(cx, left, e) == 1);
        CHECK(sign_face_edge(cx, right, e) == -1);
    }
    SUBCASE("relations that do not hold throw") {
        // Vertex 3 is not on the edge between 0 and 1.
        Index e01 = -1;
        for (Index e = 0; e < cx.num_edges(); ++e) {
            if (cx.edge(e) == std::array<Index, 2>{0, 1}) e01 = e;
        }
        REQUIRE(e01 >= 0);
        CHECK_THROWS_AS(sign_vertex_edge(cx, 3, e01), MeshError);
        Index f_without = -1;
        for (Index f = 0; f < cx.num_faces(); ++f) {
            if (cx.local_edge_index(f, e01) < 0) f_without = f;
        }
        CHECK_THROWS_AS(sign_face_edge(cx, f_without, e01), MeshError);
    }
}

TEST_CASE("face on the left of an edge gets a positive sign") {
    // Edge from (0,0,0) to (1,0,0); the face with apex at +y lies on its left
    // when seen from +z.
    const auto pill = fixtures::pillow(2, 1.0);
    const auto cx = fixtures::build(pill.soup);
    Index e01 = -1;
    for (Index e = 0; e < cx.num_edges(); ++e) {
        if (cx.edge(e) == std::array<Index, 2>{0, 1}) e01 = e;
    }
    REQUIRE(e01 >= 0);
    CHECK(cx.face(0) == std::array<Index, 3>{0, 1, 2});
    CHECK(sign_face_edge(cx, 0, e01) == 1);
}

TEST_CASE("reversing the second edge flips the edge-edge sign") {
    // Same geometry, two labelings: the edge A-B keeps its direction while
    // B-C is reversed.
    const Vec3 A(0, 0, 0), B(1, 0, 0), C(0.3, 1, 0), D(0.3, 0.3, 1);
    const std::vector<std::array<Index, 3>> t{{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {0, 2, 3}};
    const std::vector<Vec3> p1{A, B, C, D};
    const std::vector<Vec3> p2{A, C, B, D};
    const std::vector<std::array<Index, 3>> t2{{0, 2, 1}, {0, 3, 2}, {2, 3, 1}, {0, 1, 3}};
    const auto cx1 = build_complex(p1, t);
    const auto cx2 = build_complex(p2, t2);
    auto find = [](const SimplicialComplex& cx, Index a, Index b) {
        for (Index e = 0; e < cx.num_edges(); ++e) {
            if (cx.edge(e) == std::array<Index, 2>{std::min(a, b), std::max(a, b)}) return e;
        }
        return Index(-1);
    };
    // Labeling 1: A=0, B=1, C=2. Labeling 2: A=0, B=2, C=1.
    const Index ab1 = find(cx1, 0, 1), bc1 = find(cx1, 1, 2);
    const Index ab2 = find(cx2, 0, 2), bc2 = find(cx2, 2, 1);
    REQUIRE(cx1.edge(ab1) == std::array<Index, 2>{0, 1});
    REQUIRE(cx2.edge(ab2) == std::array<Index, 2>{0, 2});
    CHECK(cx1.edge(bc1) == std::array<Index, 2>{1, 2});  // B -> C
    CHECK(cx2.edge(bc2) == std::array<Index, 2>{1, 2});  // C -> B
    const int s1 = sign_edge_edge(cx1, ab1, bc1);
    const int s2 = sign_edge_edge(cx2, ab2, bc2);
    CHECK(std::abs(s1) == 1);
    CHECK(s1 == -s2);
}

TEST_CASE("circumcentric dual of an equilateral tiling") {
    const double h = 0.25;
    const auto pill = fixtures::pillow(10, h);
    const auto cx = fixtures::build(pill.soup);
    const auto dual = circumcentric_dual(cx);
    for (Index e : fixtures::deep_edges(cx, pill, 1)) {
        CHECK(dual.dual_edge_length[e] == doctest::Approx(h / std::sqrt(3.0)).epsilon(1e-12));
        CHECK(dual.primal_edge_length[e] == doctest::Approx(h).epsilon(1e-12));
    }
    // Regular hexagonal Voronoi cell: area sqrt(3)/2 h^2.
    for (Index v : fixtures::deep_vertices(pill, 1)) {
        CHECK(dual.voronoi_area[v] == doctest::Approx(std::sqrt(3.0) / 2 * h * h).epsilon(1e-12));
    }
    // Only the folded corner cells of the bottom sheet may be obtuse.
    const auto report = well_centered_report(cx, dual);
    for (Index f : report.obtuse_faces) CHECK(f >= static_cast<Index>(pill.top_faces.size()));
    CHECK(report.obtuse_faces.size() <= 4);

    const auto ico = fixtures::build(fixtures::icosahedron());
    const auto ico_report = well_centered_report(ico, circumcentric_dual(ico));
    CHECK(ico_report.passed);
    CHECK(ico_report.obtuse_faces.empty());
    CHECK(ico_report.nonpositive_dual_edges.empty());
}

TEST_CASE("right isoceles pair has a zero dual segment on the hypotenuse") {
    const auto pill = fixtures::pillow(2, 1.0, false);
    const auto cx = fixtures::build(pill.soup);
    const auto dual = circumcentric_dual(cx);
    CHECK(cx.num_edges() == 6);
    for (Index f : pill.top_faces) {
        CHECK((dual.face_circumcenter[f] - Vec3(0.5, 0.5, 0.0)).norm() < 1e-14);
    }
    Index diag = -1;
    for (Index e = 0; e < cx.num_edges(); ++e) {
        if (cx.edge(e) == std::array<Index, 2>{1, 2}) diag = e;
    }
    REQUIRE(diag >= 0);
    CHECK(std::abs(dual.dual_edge_length[diag]) < 1e-14);
}

TEST_CASE("dual cells tile the surface") {
    for (const auto& cx : {generate_mesh(SurfaceDescriptor::sphere(), 6), generate_mesh(SurfaceDescriptor::torus(), 12),
                           generate_mesh(SurfaceDescriptor::ellipsoid(), 5),
                           generate_mesh(SurfaceDescriptor::biconcave(), 5)}) {
        const auto dual = circumcentric_dual(cx);
        CHECK(std::abs(dual.total_voronoi_area() - dual.total_face_area()) <= 1e-12 * dual.total_face_area());
        std::vector<double> fragments(cx.num_vertices(), 0.0);
        for (Index e = 0; e < cx.num_edges(); ++e) {
            CHECK(dual.cell_fragment_area[e] ==
                  doctest::Approx(dual.primal_edge_length[e] * dual.dual_edge_length[e] / 4.0).epsilon(1e-13));
            for (Index v : cx.edge(e)) fragments[v] += dual.cell_fragment_area[e];
        }
        for (Index v = 0; v < cx.num_vertices(); ++v) {
            CHECK(fragments[v] == doctest::Approx(dual.voronoi_area[v]).epsilon(1e-12));
        }
    }
}

TEST_CASE("mesh size is the largest circumcircle diameter") {
    const auto cx = fixtures::build(fixtures::icosahedron());
    const auto dual = circumcentric_dual(cx);
    const double edge = dual.primal_edge_length[0];
    CHECK(dual.mesh_size() == doctest::Approx(2.0 * edge / std::sqrt(3.0)).epsilon(1e-12));
    const auto sphere = generate_mesh(SurfaceDescriptor::sphere(), 5);
    const auto sd = circumcentric_dual(sphere);
    double largest = 0.0;
    for (double r : sd.face_circumradius) largest = std::max(largest, 2.0 * r);
    CHECK(sd.mesh_size() == largest);
}

TEST_CASE("well-centered report flags obtuse faces") {
    const std::vector<Vec3> p{Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(1, 0.3, 0)};
    const std::vector<std::array<Index, 3>> t{{0, 1, 2}, {0, 2, 1}};
    const auto cx = build_complex(p, t);
    const auto dual = circumcentric_dual(cx);
    const auto report = well_centered_report(cx, dual);
    CHECK_FALSE(report.passed);
    CHECK(report.obtuse_faces == std::vector<Index>{0, 1});
    CHECK(report.worst_angle > std::numbers::pi / 2);
    CHECK_FALSE(report.nonpositive_dual_edges.empty());
}

TEST_CASE("geodesic sphere of frequency 8 is well-centered") {
    const auto cx = generate_mesh(SurfaceDescriptor::sphere(), 8);
    CHECK(cx.num_vertices() == 642);
    CHECK(well_centered_report(cx, circumcentric_dual(cx)).passed);
}

TEST_CASE("Euler characteristic of the catalog") {
    CHECK(generate_mesh(SurfaceDescriptor::sphere(), 10).euler_characteristic() == 2);
    CHECK(generate_mesh(SurfaceDescriptor::ellipsoid(), 7).euler_characteristic() == 2);
    CHECK(generate_mesh(SurfaceDescriptor::biconcave(), 7).euler_characteristic() == 2);
    CHECK(generate_mesh(SurfaceDescriptor::torus(), 16).euler_characteristic() == 0);
}

TEST_CASE("corner angles of a face sum to pi") {
    const auto cx = generate_mesh(SurfaceDescriptor::torus(), 10);
    for (Index f = 0; f < cx.num_faces(); ++f) {
        CHECK(corner_angle(cx, f, 0) + corner_angle(cx, f, 1) + corner_angle(cx, f, 2) ==
              doctest::Approx(std::numbers::pi).epsilon(1e-13));
    }
}

TEST_CASE("OFF and OBJ input") {
    const auto soup = load_mesh_file(DECFLOW_TEST_DATA "/icosahedron.off");
    const auto cx = fixtures::build(soup);
    CHECK(cx.num_vertices() == 12);
    CHECK(cx.num_edges() == 30);
    CHECK(cx.num_faces() == 20);

    std::stringstream off;
    write_off(off, cx);
    const auto again = read_off(off);
    CHECK(again.positions.size() == 12);
    CHECK(again.triangles.size() == 20);
    for (std::size_t v = 0; v < 12; ++v) CHECK(again.positions[v] == soup.positions[v]);

    std::stringstream obj("# tetra\nv 1 1 1\nv 1 -1 -1\nv -1 1 -1\nv -1 -1 1\nf 1 2 3\nf 1 4 2\nf 1/1 3/1 4/1\nf 2 4 3\n");
    const auto tet = read_obj(obj);
    CHECK(tet.positions.size() == 4);
    CHECK(tet.triangles.size() == 4);
    CHECK(fixtures::build(tet).num_edges() == 6);

    std::stringstream bad("OFF\n3 1 0\n0 0 0\n1 0 0\n");
    CHECK_THROWS_AS(read_off(bad), MeshError);
    CHECK_THROWS_AS(load_mesh_file("does-not-exist.off"), MeshError);
    CHECK_THROWS_AS(build_complex(load_mesh_file(DECFLOW_TEST_DATA "/open_strip.off").positions,
                                  load_mesh_file(DECFLOW_TEST_DATA "/open_strip.off").triangles),
                    MeshError);
}
