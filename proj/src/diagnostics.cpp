#include "decflow/diagnostics.hpp"

#include "decflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace decflow {

double l2_inner_product(const Form1& u, const Form1& star_u, const Form1& v, const Form1& star_v,
                        const SimplicialComplex& complex, const DualGeometry& dual) {
    // Every edge enters the vertex products of both endpoints, so
    // sum_v |⋆v| ⟨u,v⟩(v) = sum_e |⋆e| / (2|e|) (u v + ⋆u ⋆v).
    double sum = 0.0;
    for (Index e = 0; e < complex.num_edges(); ++e) {
        sum += dual.dual_edge_length[e] / (2.0 * dual.primal_edge_length[e]) * (u[e] * v[e] + star_u[e] * star_v[e]);
    }
    return sum;
}

double kinetic_energy(const SolverState& state, const SimplicialComplex& complex, const DualGeometry& dual) {
    return 0.5 * l2_inner_product(state.u, state.u_dual, state.u, state.u_dual, complex, dual);
}

double cosine_similarity(const Form1& u, const Form1& star_u, const Form1& v, const Form1& star_v,
                         const SimplicialComplex& complex, const DualGeometry& dual) {
    const double uu = l2_inner_product(u, star_u, u, star_u, complex, dual);
    const double vv = l2_inner_product(v, star_v, v, star_v, complex, dual);
    if (!(uu > 0.0) || !(vv > 0.0)) return 0.0;
    return l2_inner_product(u, star_u, v, star_v, complex, dual) / std::sqrt(uu * vv);
}

Vorticity vorticity_form(const SolverState& state, const SimplicialComplex& complex, const DualGeometry& dual) {
    Vorticity w;
    w.edge = curl_edge_midpoint(state.u, complex, dual);
    w.face = d1(state.u, complex).values();
    for (Index f = 0; f < complex.num_faces(); ++f) w.face[f] /= dual.face_area[f];
    return w;
}

VortexTrack track_vortices(const Eigen::VectorXd& face_vorticity, const SimplicialComplex& complex,
                           const DualGeometry& dual, int count) {
    if (count < 1) throw ConfigError("vortex count must be at least 1");
    if (face_vorticity.size() != complex.num_faces()) throw ConfigError("vorticity size does not match the face count");

    // (value, index) order with index as tie-break: face f beats g if
    // value_f > value_g, or equal values and f < g.
    auto beats = [&](Index f, Index g, double sign) {
        const double a = sign * face_vorticity[f], b = sign * face_vorticity[g];
        return a > b || (a == b && f < g);
    };

    std::vector<Index> extrema;
    for (Index f = 0; f < complex.num_faces(); ++f) {
        const double value = face_vorticity[f];
        if (value == 0.0) continue;
        const double sign = value > 0.0 ? 1.0 : -1.0;
        bool extremal = true;
        for (Index e : complex.face_edges(f)) {
            for (Index g : complex.edge_faces(e)) {
                if (g != f && !beats(f, g, sign)) extremal = false;
            }
        }
        if (extremal) extrema.push_back(f);
    }
    std::sort(extrema.begin(), extrema.end(), [&](Index a, Index b) {
        const double va = std::abs(face_vorticity[a]), vb = std::abs(face_vorticity[b]);
        return va > vb || (va == vb && a < b);
    });

    // Nearly flat extrema split into several faces of one vertex fan; keep
    // the strongest and drop same-signed extrema touching it.
    auto touches = [&](Index f, Index g) {
        for (Index a : complex.face(f)) {
            for (Index b : complex.face(g)) {
                if (a == b) return true;
            }
        }
        return false;
    };
    VortexTrack track;
    for (Index f : extrema) {
        if (static_cast<int>(track.vortices.size()) == count) break;
        bool duplicate = false;
        for (const auto& v : track.vortices) {
            if ((v.strength > 0.0) == (face_vorticity[f] > 0.0) && touches(f, v.face)) duplicate = true;
        }
        if (!duplicate) track.vortices.push_back({dual.face_circumcenter[f], face_vorticity[f], f});
    }
    track.warning = static_cast<int>(track.vortices.size()) < count;
    return track;
}

std::vector<double> eoc_table(const std::vector<double>& errors, const std::vector<double>& mesh_sizes) {
    if (errors.size() != mesh_sizes.size()) throw ConfigError("eoc: errors and mesh sizes differ in length");
    if (errors.size() < 2) throw ConfigError("eoc: need at least two refinement levels");
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!(errors[i] > 0.0) || !std::isfinite(errors[i])) throw ConfigError("eoc: errors must be positive");
        if (!(mesh_sizes[i] > 0.0)) throw ConfigError("eoc: mesh sizes must be positive");
        if (i > 0 && !(mesh_sizes[i] < mesh_sizes[i - 1])) throw ConfigError("eoc: mesh sizes must decrease strictly");
    }
    std::vector<double> eoc;
    for (std::size_t i = 1; i < errors.size(); ++i) {
        eoc.push_back(std::log(errors[i - 1] / errors[i]) / std::log(mesh_sizes[i - 1] / mesh_sizes[i]));
    }
    return eoc;
}

Index nearest_vertex(const SimplicialComplex& complex, const Vec3& x) {
    Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Index v = 0; v < complex.num_vertices(); ++v) {
        const double d = (complex.position(v) - x).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = v;
        }
    }
    return best;
}

std::vector<double> edge_path_distances(const SimplicialComplex& complex, const Vec3& source) {
    std::vector<double> dist(complex.num_vertices(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, Index>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    const Index s = nearest_vertex(complex, source);
    dist[s] = (complex.position(s) - source).norm();
    queue.emplace(dist[s], s);
    while (!queue.empty()) {
        const auto [d, v] = queue.top();
        queue.pop();
        if (d > dist[v]) continue;
        for (Index e : complex.vertex_edges(v)) {
            const auto& ends = complex.edge(e);
            const Index w = ends[0] == v ? ends[1] : ends[0];
            const double nd = d + complex.edge_vector(e).norm();
            if (nd < dist[w]) {
                dist[w] = nd;
                queue.emplace(nd, w);
            }
        }
    }
    return dist;
}

double edge_path_distance(const SimplicialComplex& complex, const Vec3& a, const Vec3& b) {
    const auto dist = edge_path_distances(complex, a);
    const Index t = nearest_vertex(complex, b);
    return dist[t] + (complex.position(t) - b).norm();
}

DiagnosticsRecord compute_diagnostics(const SolverState& state, const SimplicialComplex& complex,
                                      const DualGeometry& dual, int vortex_count) {
    DiagnosticsRecord r;
    r.time = state.time;
    r.step_index = state.step_index;
    r.kinetic_energy = kinetic_energy(state, complex, dual);
    r.divergence_residual = state.divergence_residual;
    r.solver_residual = state.solver_residual;
    const auto w = vorticity_form(state, complex, dual);
    r.curl_max = w.edge.size() ? w.edge.lpNorm<Eigen::Infinity>() : 0.0;
    r.vortices = track_vortices(w.face, complex, dual, vortex_count);
    return r;
}

} // namespace decflow
