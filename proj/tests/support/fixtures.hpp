#pragma once

#include "decflow/mesh.hpp"
#include "decflow/mesh_io.hpp"
#include "decflow/surfaces.hpp"

#include <cmath>
#include <vector>

namespace fixtures {

using decflow::Index;
using decflow::SimplicialComplex;
using decflow::TriangleSoup;
using decflow::Vec3;

inline SimplicialComplex build(const TriangleSoup& soup) {
    return decflow::build_complex(soup.positions, soup.triangles);
}

inline TriangleSoup tetrahedron() {
    return {{Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)},
            {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}}};
}

inline TriangleSoup icosahedron() { return decflow::geodesic_sphere(1); }

/// Flat sheet in z = 0 glued along its boundary to a second sheet whose
/// interior sits at z = -h, so the result is closed. The top sheet is an m x m parallelogram of equilateral
/// triangles with side h (or right isoceles ones), wound counter-clockwise
/// seen from +z.
struct Pillow {
    TriangleSoup soup;
    int m = 0;
    double h = 0.0;
    std::vector<Index> top_faces;

    Index top_vertex(int i, int j) const { return j * m + i; }
    /// Top vertex at least `depth` rings away from the glued boundary.
    bool deep(Index v, int depth) const {
        if (v >= m * m) return false;
        const int i = v % m, j = v / m;
        return i >= depth && j >= depth && i < m - depth && j < m - depth;
    }
};

inline Pillow pillow(int m, double h, bool equilateral = true) {
    Pillow p;
    p.m = m;
    p.h = h;
    auto& pos = p.soup.positions;
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            pos.emplace_back(equilateral ? h * (i + 0.5 * j) : h * i, equilateral ? h * j * std::sqrt(3.0) / 2 : h * j,
                             0.0);
        }
    }
    std::vector<Index> bottom(m * m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            const Index v = j * m + i;
            if (i == 0 || j == 0 || i == m - 1 || j == m - 1) {
                bottom[v] = v;
            } else {
                bottom[v] = static_cast<Index>(pos.size());
                pos.push_back(pos[v] - Vec3(0, 0, h));
            }
        }
    }
    auto& tris = p.soup.triangles;
    for (int j = 0; j + 1 < m; ++j) {
        for (int i = 0; i + 1 < m; ++i) {
            const Index a = j * m + i, b = a + 1, c = a + m, d = a + m + 1;
            p.top_faces.push_back(static_cast<Index>(tris.size()));
            tris.push_back({a, b, c});
            p.top_faces.push_back(static_cast<Index>(tris.size()));
            tris.push_back({b, d, c});
        }
    }
    // In the two corner cells both ends of the diagonal lie on the glued
    // boundary, so the bottom sheet takes the other diagonal there.
    for (int j = 0; j + 1 < m; ++j) {
        for (int i = 0; i + 1 < m; ++i) {
            const Index a = bottom[j * m + i], b = bottom[j * m + i + 1], c = bottom[(j + 1) * m + i],
                        d = bottom[(j + 1) * m + i + 1];
            if ((i == 0 && j == 0) || (i == m - 2 && j == m - 2)) {
                tris.push_back({a, d, b});
                tris.push_back({a, c, d});
            } else {
                tris.push_back({a, c, b});
                tris.push_back({b, c, d});
            }
        }
    }
    return p;
}

/// Edges of the top sheet whose endpoints are both deep.
inline std::vector<Index> deep_edges(const SimplicialComplex& cx, const Pillow& p, int depth) {
    std::vector<Index> out;
    for (Index e = 0; e < cx.num_edges(); ++e) {
        if (p.deep(cx.edge(e)[0], depth) && p.deep(cx.edge(e)[1], depth)) out.push_back(e);
    }
    return out;
}

inline std::vector<Index> deep_vertices(const Pillow& p, int depth) {
    std::vector<Index> out;
    for (Index v = 0; v < p.m * p.m; ++v) {
        if (p.deep(v, depth)) out.push_back(v);
    }
    return out;
}

} // namespace fixtures
