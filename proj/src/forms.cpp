#include "decflow/forms.hpp"

#include "decflow/error.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <string>

namespace decflow {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix assemble(Index rows, Index cols, const Triplets& triplets) {
    SparseMatrix m(rows, cols);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

// Coefficients of (du)(f) scaled by w.
void add_face_circulation(Triplets& t, const SimplicialComplex& cx, Index row, Index f, double w) {
    for (int k = 0; k < 3; ++k) {
        t.emplace_back(row, cx.face_edges(f)[k], w * cx.face_edge_signs(f)[k]);
    }
}

} // namespace

SparseMatrix exterior_derivative_0(const SimplicialComplex& cx) {
    Triplets t;
    t.reserve(2 * cx.num_edges());
    for (Index e = 0; e < cx.num_edges(); ++e) {
        t.emplace_back(e, cx.edge(e)[1], 1.0);
        t.emplace_back(e, cx.edge(e)[0], -1.0);
    }
    return assemble(cx.num_edges(), cx.num_vertices(), t);
}

SparseMatrix exterior_derivative_1(const SimplicialComplex& cx) {
    Triplets t;
    t.reserve(3 * cx.num_faces());
    for (Index f = 0; f < cx.num_faces(); ++f) add_face_circulation(t, cx, f, f, 1.0);
    return assemble(cx.num_faces(), cx.num_edges(), t);
}

SparseMatrix hodge_star_matrix(const SimplicialComplex& cx, const DualGeometry& dual) {
    (void)dual;
    Triplets t;
    t.reserve(5 * cx.num_edges());
    for (Index e = 0; e < cx.num_edges(); ++e) {
        const Vec3 ev = cx.edge_vector(e);
        const double len2 = ev.squaredNorm();
        for (Index f : cx.edge_faces(e)) {
            for (Index other : cx.face_edges(f)) {
                if (other == e) continue;
                const Vec3 ov = cx.edge_vector(other);
                // sqrt(|e|^2 |ẽ|^2 - (e.ẽ)^2), evaluated as |e x ẽ|
                const double denom = ev.cross(ov).norm();
                if (!(denom > 1e-14 * len2 * ov.squaredNorm())) {
                    throw MeshError("hodge star: degenerate face " + std::to_string(f));
                }
                const double w = 0.25 * sign_edge_edge(cx, f, e, other) / denom;
                t.emplace_back(e, e, w * ev.dot(ov));
                t.emplace_back(e, other, -w * len2);
            }
        }
    }
    return assemble(cx.num_edges(), cx.num_edges(), t);
}

SparseMatrix divergence_matrix(const SimplicialComplex& cx, const DualGeometry& dual) {
    Triplets t;
    t.reserve(2 * cx.num_edges());
    for (Index v = 0; v < cx.num_vertices(); ++v) {
        const double area = dual.voronoi_area[v];
        if (!(area > 0.0)) {
            throw MeshError("divergence: non-positive Voronoi area at vertex " + std::to_string(v));
        }
        for (Index e : cx.vertex_edges(v)) {
            const double ratio = dual.dual_edge_length[e] / dual.primal_edge_length[e];
            t.emplace_back(v, e, -sign_vertex_edge(cx, v, e) * ratio / area);
        }
    }
    return assemble(cx.num_vertices(), cx.num_edges(), t);
}

namespace {

// Face-to-edge halves of the curl and the rot-rot Laplacian; both act on d1 u,
// so they vanish exactly whenever d1 u does.
SparseMatrix curl_face_weights(const SimplicialComplex& cx, const DualGeometry& dual) {
    Triplets t;
    t.reserve(2 * cx.num_edges());
    for (Index e = 0; e < cx.num_edges(); ++e) {
        const auto& lr = cx.edge_faces(e);
        const double area = dual.face_area[lr[0]] + dual.face_area[lr[1]];
        for (Index f : lr) t.emplace_back(e, f, 1.0 / area);
    }
    return assemble(cx.num_edges(), cx.num_faces(), t);
}

SparseMatrix laplace_face_weights(const SimplicialComplex& cx, const DualGeometry& dual) {
    Triplets t;
    t.reserve(2 * cx.num_edges());
    for (Index e = 0; e < cx.num_edges(); ++e) {
        const double star_len = dual.dual_edge_length[e];
        if (std::abs(star_len) <= 1e-12 * dual.primal_edge_length[e]) {
            throw MeshError("laplace_rr: zero dual edge length at edge " + std::to_string(e));
        }
        const double scale = -dual.primal_edge_length[e] / star_len;
        for (Index f : cx.edge_faces(e)) t.emplace_back(e, f, scale * sign_face_edge(cx, f, e) / dual.face_area[f]);
    }
    return assemble(cx.num_edges(), cx.num_faces(), t);
}

} // namespace

SparseMatrix curl_matrix(const SimplicialComplex& cx, const DualGeometry& dual) {
    SparseMatrix m = curl_face_weights(cx, dual) * exterior_derivative_1(cx);
    m.makeCompressed();
    return m;
}

SparseMatrix laplace_rr_matrix(const SimplicialComplex& cx, const DualGeometry& dual) {
    SparseMatrix m = laplace_face_weights(cx, dual) * exterior_derivative_1(cx);
    m.makeCompressed();
    return m;
}

DecOperators DecOperators::build(const SimplicialComplex& cx, const DualGeometry& dual) {
    return {exterior_derivative_0(cx), exterior_derivative_1(cx), hodge_star_matrix(cx, dual),
            divergence_matrix(cx, dual), curl_matrix(cx, dual), laplace_rr_matrix(cx, dual)};
}

Form1 sample_one_form(const VectorField& field, const SimplicialComplex& cx, const DualGeometry& dual) {
    // The edge vector is orthogonal to both adjacent face normals, so the
    // normal component of the field never contributes to field . e.
    Eigen::VectorXd values(cx.num_edges());
    for (Index e = 0; e < cx.num_edges(); ++e) {
        values[e] = field(dual.edge_midpoint[e]).dot(cx.edge_vector(e));
    }
    return Form1(std::move(values));
}

Form1 d0(const Form0& q, const SimplicialComplex& cx) {
    return Form1(exterior_derivative_0(cx) * q.values());
}

Form2 d1(const Form1& u, const SimplicialComplex& cx) {
    return Form2(exterior_derivative_1(cx) * u.values());
}

Form1 hodge_star_edge(const Form1& u, const SimplicialComplex& cx, const DualGeometry& dual) {
    return Form1(hodge_star_matrix(cx, dual) * u.values());
}

Form0 divergence_vertex(const Form1& u, const SimplicialComplex& cx, const DualGeometry& dual) {
    return Form0(divergence_matrix(cx, dual) * u.values());
}

Eigen::VectorXd curl_edge_midpoint(const Form1& u, const SimplicialComplex& cx, const DualGeometry& dual) {
    return curl_face_weights(cx, dual) * d1(u, cx).values();
}

Form1 laplace_rr(const Form1& u, const SimplicialComplex& cx, const DualGeometry& dual) {
    return Form1(laplace_face_weights(cx, dual) * d1(u, cx).values());
}

double inner_product_edge(const Form1& u_tilde, const Form1& u, const Form1& star_u_tilde, const Form1& star_u,
                          Index e, const DualGeometry& dual) {
    const double len = dual.primal_edge_length[e];
    return (u_tilde[e] * u[e] + star_u_tilde[e] * star_u[e]) / (len * len);
}

double inner_product_vertex(const Form1& u_tilde, const Form1& u, const Form1& star_u_tilde, const Form1& star_u,
                            Index v, const SimplicialComplex& cx, const DualGeometry& dual) {
    double sum = 0.0;
    for (Index e : cx.vertex_edges(v)) {
        sum += dual.dual_edge_length[e] / dual.primal_edge_length[e] *
               (u_tilde[e] * u[e] + star_u_tilde[e] * star_u[e]);
    }
    return sum / (4.0 * dual.voronoi_area[v]);
}

Form0 inner_product_vertices(const Form1& u_tilde, const Form1& u, const Form1& star_u_tilde, const Form1& star_u,
                             const SimplicialComplex& cx, const DualGeometry& dual) {
    Form0 out = Form0::zero(cx.num_vertices());
    for (Index v = 0; v < cx.num_vertices(); ++v) {
        out[v] = inner_product_vertex(u_tilde, u, star_u_tilde, star_u, v, cx, dual);
    }
    return out;
}

std::vector<Vec3> vertex_normals(const SimplicialComplex& cx, const DualGeometry& dual) {
    std::vector<Vec3> normals(cx.num_vertices(), Vec3::Zero());
    for (Index f = 0; f < cx.num_faces(); ++f) {
        for (Index v : cx.face(f)) normals[v] += dual.face_area[f] * dual.face_normal[f];
    }
    for (auto& n : normals) n.normalize();
    return normals;
}

std::vector<Vec3> reconstruct_vertex_vectors(const Form1& u, const SimplicialComplex& cx, const DualGeometry& dual) {
    const auto normals = vertex_normals(cx, dual);
    std::vector<Vec3> out(cx.num_vertices());
    for (Index v = 0; v < cx.num_vertices(); ++v) {
        const auto edges = cx.vertex_edges(v);
        if (edges.size() < 2) {
            throw MeshError("reconstruction: vertex " + std::to_string(v) + " has valence < 2");
        }
        const Vec3& n = normals[v];
        const Vec3 t1 = n.unitOrthogonal();
        const Vec3 t2 = n.cross(t1);
        Eigen::Matrix2d normal_matrix = Eigen::Matrix2d::Zero();
        Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
        for (Index e : edges) {
            const Vec3 ev = cx.edge_vector(e);
            const Eigen::Vector2d a(ev.dot(t1), ev.dot(t2));
            normal_matrix += a * a.transpose();
            rhs += u[e] * a;
        }
        const double trace = normal_matrix.trace();
        if (!(normal_matrix.determinant() > 1e-12 * trace * trace)) {
            throw MeshError("reconstruction: rank-deficient system at vertex " + std::to_string(v));
        }
        const Eigen::Vector2d w = normal_matrix.ldlt().solve(rhs);
        out[v] = w[0] * t1 + w[1] * t2;
    }
    return out;
}

} // namespace decflow
