#include "decflow/mesh.hpp"

#include "decflow/error.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>
#include <tuple>

namespace decflow {

namespace {

struct HalfEdgeRecord {
    Index lo, hi;
    Index face;
    int local;

    auto key() const { return std::tie(lo, hi, face, local); }
    bool operator<(const HalfEdgeRecord& o) const { return key() < o.key(); }
};

std::vector<HalfEdgeRecord> collect_half_edges(std::span<const std::array<Index, 3>> faces) {
    std::vector<HalfEdgeRecord> records;
    records.reserve(faces.size() * 3);
    for (Index f = 0; f < static_cast<Index>(faces.size()); ++f) {
        for (int k = 0; k < 3; ++k) {
            Index a = faces[f][k], b = faces[f][(k + 1) % 3];
            records.push_back({std::min(a, b), std::max(a, b), f, k});
        }
    }
    std::sort(records.begin(), records.end());
    return records;
}

// +1 when local edge k of the triangle runs from the lower to the higher index.
int traversal_direction(const std::array<Index, 3>& tri, int k) {
    return tri[k] < tri[(k + 1) % 3] ? 1 : -1;
}

std::vector<Index> build_csr(Index n, const std::vector<std::pair<Index, Index>>& pairs,
                             std::vector<Index>& offsets) {
    offsets.assign(n + 1, 0);
    for (auto [v, item] : pairs) ++offsets[v + 1];
    for (Index v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
    std::vector<Index> data(pairs.size());
    std::vector<Index> cursor(offsets.begin(), offsets.end() - 1);
    for (auto [v, item] : pairs) data[cursor[v]++] = item;
    return data;
}

} // namespace

int SimplicialComplex::local_edge_index(Index f, Index e) const {
    for (int k = 0; k < 3; ++k) {
        if (face_edges_[f][k] == e) return k;
    }
    return -1;
}

SimplicialComplex build_complex(std::span<const Vec3> positions,
                                std::span<const std::array<Index, 3>> triangles) {
    const Index nv = static_cast<Index>(positions.size());
    const Index nf = static_cast<Index>(triangles.size());
    if (nf == 0) throw MeshError("mesh has no triangles");

    for (Index f = 0; f < nf; ++f) {
        const auto& t = triangles[f];
        for (Index v : t) {
            if (v < 0 || v >= nv) {
                std::ostringstream msg;
                msg << "triangle " << f << " references vertex " << v << " out of range [0," << nv << ")";
                throw MeshError(msg.str());
            }
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
            throw MeshError("degenerate triangle " + std::to_string(f) + ": repeated vertex");
        }
        const Vec3 ab = positions[t[1]] - positions[t[0]];
        const Vec3 ac = positions[t[2]] - positions[t[0]];
        const Vec3 bc = positions[t[2]] - positions[t[1]];
        const double scale = std::max({ab.squaredNorm(), ac.squaredNorm(), bc.squaredNorm()});
        if (!(ab.cross(ac).norm() > 1e-14 * scale)) {
            throw MeshError("degenerate triangle " + std::to_string(f) + ": zero area");
        }
    }

    // Manifold check on the input winding.
    const auto records = collect_half_edges(triangles);
    for (std::size_t i = 0; i < records.size();) {
        std::size_t j = i;
        while (j < records.size() && records[j].lo == records[i].lo && records[j].hi == records[i].hi) ++j;
        if (j - i != 2) {
            std::ostringstream msg;
            msg << (j - i == 1 ? "boundary" : "non-manifold") << " edge [" << records[i].lo << ","
                << records[i].hi << "] has " << (j - i) << " incident faces";
            throw MeshError(msg.str());
        }
        i = j;
    }

    // Neighbour across each local edge, from the paired records.
    std::vector<std::array<std::pair<Index, int>, 3>> neighbour(nf);
    for (std::size_t i = 0; i < records.size(); i += 2) {
        const auto& r0 = records[i];
        const auto& r1 = records[i + 1];
        neighbour[r0.face][r0.local] = {r1.face, r1.local};
        neighbour[r1.face][r1.local] = {r0.face, r0.local};
    }

    // Breadth-first orientation propagation; flip = -1 reverses a face.
    std::vector<int> flip(nf, 0);
    for (Index seed = 0; seed < nf; ++seed) {
        if (flip[seed] != 0) continue;
        flip[seed] = 1;
        std::deque<Index> queue{seed};
        while (!queue.empty()) {
            const Index f = queue.front();
            queue.pop_front();
            for (int k = 0; k < 3; ++k) {
                const auto [g, kg] = neighbour[f][k];
                const int dir_f = flip[f] * traversal_direction(triangles[f], k);
                const int needed = -dir_f * traversal_direction(triangles[g], kg);
                if (flip[g] == 0) {
                    flip[g] = needed;
                    queue.push_back(g);
                } else if (flip[g] != needed) {
                    throw MeshError("mesh is not orientable (conflict at face " + std::to_string(g) + ")");
                }
            }
        }
    }

    SimplicialComplex cx;
    cx.positions_.assign(positions.begin(), positions.end());
    cx.faces_.resize(nf);
    for (Index f = 0; f < nf; ++f) {
        auto t = triangles[f];
        if (flip[f] < 0) std::swap(t[1], t[2]);
        cx.faces_[f] = t;
    }

    const auto oriented = collect_half_edges(cx.faces_);
    cx.face_edges_.resize(nf);
    cx.face_edge_signs_.resize(nf);
    for (std::size_t i = 0; i < oriented.size(); i += 2) {
        const Index e = static_cast<Index>(cx.edges_.size());
        cx.edges_.push_back({oriented[i].lo, oriented[i].hi});
        std::array<Index, 2> lr{-1, -1};
        for (std::size_t j = i; j < i + 2; ++j) {
            const auto& r = oriented[j];
            const int s = traversal_direction(cx.faces_[r.face], r.local);
            cx.face_edges_[r.face][r.local] = e;
            cx.face_edge_signs_[r.face][r.local] = s;
            lr[s > 0 ? 0 : 1] = r.face;
        }
        cx.edge_faces_.push_back(lr);
    }

    std::vector<std::pair<Index, Index>> ve, vf;
    ve.reserve(cx.edges_.size() * 2);
    vf.reserve(nf * 3);
    for (Index e = 0; e < cx.num_edges(); ++e) {
        ve.emplace_back(cx.edges_[e][0], e);
        ve.emplace_back(cx.edges_[e][1], e);
    }
    for (Index f = 0; f < nf; ++f) {
        for (Index v : cx.faces_[f]) vf.emplace_back(v, f);
    }
    cx.vertex_edge_data_ = build_csr(nv, ve, cx.vertex_edge_offsets_);
    cx.vertex_face_data_ = build_csr(nv, vf, cx.vertex_face_offsets_);
    for (Index v = 0; v < nv; ++v) {
        if (cx.vertex_edges(v).empty()) {
            throw MeshError("vertex " + std::to_string(v) + " is not referenced by any triangle");
        }
    }
    return cx;
}

int sign_face_edge(const SimplicialComplex& complex, Index f, Index e) {
    const int k = complex.local_edge_index(f, e);
    if (k < 0) {
        throw MeshError("edge " + std::to_string(e) + " is not part of face " + std::to_string(f));
    }
    return complex.face_edge_signs(f)[k];
}

int sign_vertex_edge(const SimplicialComplex& complex, Index v, Index e) {
    const auto& ed = complex.edge(e);
    if (ed[1] == v) return 1;
    if (ed[0] == v) return -1;
    throw MeshError("vertex " + std::to_string(v) + " is not part of edge " + std::to_string(e));
}

int sign_edge_edge(const SimplicialComplex& complex, Index f, Index e, Index e_other) {
    const int a = complex.local_edge_index(f, e);
    const int b = complex.local_edge_index(f, e_other);
    if (a < 0 || b < 0 || a == b) {
        throw MeshError("edges " + std::to_string(e) + " and " + std::to_string(e_other) +
                        " are not two distinct edges of face " + std::to_string(f));
    }
    // Traversal directions t_k = s_{f,e_k} e_k turn counter-clockwise by the
    // exterior angle from t_k to t_{k+1}, so t_k x t_{k+1} points along the
    // face normal and t_k x t_{k+2} against it.
    const auto& s = complex.face_edge_signs(f);
    const int successor = (b == (a + 1) % 3) ? 1 : -1;
    return s[a] * s[b] * successor;
}

int sign_edge_edge(const SimplicialComplex& complex, Index e, Index e_other) {
    for (Index f : complex.edge_faces(e)) {
        if (complex.local_edge_index(f, e_other) >= 0 && e != e_other) {
            return sign_edge_edge(complex, f, e, e_other);
        }
    }
    throw MeshError("edges " + std::to_string(e) + " and " + std::to_string(e_other) + " share no face");
}

double corner_angle(const SimplicialComplex& complex, Index f, int k) {
    const auto& t = complex.face(f);
    const Vec3& p = complex.position(t[k]);
    const Vec3 a = complex.position(t[(k + 1) % 3]) - p;
    const Vec3 b = complex.position(t[(k + 2) % 3]) - p;
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

double DualGeometry::mesh_size() const {
    double h = 0.0;
    for (double r : face_circumradius) h = std::max(h, 2.0 * r);
    return h;
}

double DualGeometry::total_face_area() const {
    double sum = 0.0;
    for (double a : face_area) sum += a;
    return sum;
}

double DualGeometry::total_voronoi_area() const {
    double sum = 0.0;
    for (double a : voronoi_area) sum += a;
    return sum;
}

DualGeometry circumcentric_dual(const SimplicialComplex& cx) {
    const Index nf = cx.num_faces(), ne = cx.num_edges(), nv = cx.num_vertices();
    DualGeometry d;
    d.face_circumcenter.resize(nf);
    d.face_circumradius.resize(nf);
    d.face_area.resize(nf);
    d.face_normal.resize(nf);
    d.edge_midpoint.resize(ne);
    d.primal_edge_length.resize(ne);
    d.dual_edge_parts.assign(ne, {0.0, 0.0});
    d.dual_edge_length.resize(ne);
    d.cell_fragment_area.resize(ne);
    d.voronoi_area.assign(nv, 0.0);

    for (Index f = 0; f < nf; ++f) {
        const auto& t = cx.face(f);
        const Vec3& a = cx.position(t[0]);
        const Vec3 ab = cx.position(t[1]) - a;
        const Vec3 ac = cx.position(t[2]) - a;
        const Vec3 n = ab.cross(ac);
        const double n2 = n.squaredNorm();
        if (!(n2 > 0.0) || !std::isfinite(n2)) {
            throw MeshError("degenerate circumcenter in face " + std::to_string(f));
        }
        const Vec3 offset = (ac.squaredNorm() * n.cross(ab) + ab.squaredNorm() * ac.cross(n)) / (2.0 * n2);
        d.face_circumcenter[f] = a + offset;
        d.face_circumradius[f] = offset.norm();
        d.face_area[f] = 0.5 * std::sqrt(n2);
        d.face_normal[f] = n / std::sqrt(n2);
    }

    for (Index e = 0; e < ne; ++e) {
        const auto& ed = cx.edge(e);
        d.edge_midpoint[e] = 0.5 * (cx.position(ed[0]) + cx.position(ed[1]));
        d.primal_edge_length[e] = cx.edge_vector(e).norm();
    }

    // Signed segment |c(e) c(f)| = (|e|/2) cot(angle opposite e in f).
    for (Index f = 0; f < nf; ++f) {
        const auto& t = cx.face(f);
        for (int k = 0; k < 3; ++k) {
            const Index e = cx.face_edges(f)[k];
            const Vec3& o = cx.position(t[(k + 2) % 3]);
            const Vec3 p = cx.position(t[k]) - o;
            const Vec3 q = cx.position(t[(k + 1) % 3]) - o;
            const double cot = p.dot(q) / p.cross(q).norm();
            const int side = cx.face_edge_signs(f)[k] > 0 ? 0 : 1;
            d.dual_edge_parts[e][side] = 0.5 * d.primal_edge_length[e] * cot;
        }
    }

    for (Index e = 0; e < ne; ++e) {
        d.dual_edge_length[e] = d.dual_edge_parts[e][0] + d.dual_edge_parts[e][1];
        d.cell_fragment_area[e] = 0.25 * d.primal_edge_length[e] * d.dual_edge_length[e];
        for (Index v : cx.edge(e)) d.voronoi_area[v] += d.cell_fragment_area[e];
    }
    return d;
}

WellCenteredReport well_centered_report(const SimplicialComplex& cx, const DualGeometry& dual) {
    constexpr double right_angle = std::numbers::pi / 2.0;
    WellCenteredReport report;
    for (Index f = 0; f < cx.num_faces(); ++f) {
        double largest = 0.0;
        for (int k = 0; k < 3; ++k) largest = std::max(largest, corner_angle(cx, f, k));
        if (largest > right_angle + 1e-12) report.obtuse_faces.push_back(f);
        if (largest > report.worst_angle) {
            report.worst_angle = largest;
            report.worst_face = f;
        }
    }
    for (Index e = 0; e < cx.num_edges(); ++e) {
        if (dual.dual_edge_length[e] <= 1e-14 * dual.primal_edge_length[e]) {
            report.nonpositive_dual_edges.push_back(e);
        }
    }
    report.passed = report.obtuse_faces.empty() && report.nonpositive_dual_edges.empty();
    return report;
}

} // namespace decflow
