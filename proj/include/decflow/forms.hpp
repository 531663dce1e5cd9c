#pragma once

#include "decflow/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <vector>

namespace decflow {

using SparseMatrix = Eigen::SparseMatrix<double>;
using VectorField = std::function<Vec3(const Vec3&)>;

/// Discrete k-form: one value per k-simplex (vertex, oriented edge, face).
template <int Degree>
class DiscreteForm {
public:
    static_assert(Degree >= 0 && Degree <= 2);

    DiscreteForm() = default;
    explicit DiscreteForm(Eigen::VectorXd values) : values_(std::move(values)) {}

    static DiscreteForm zero(Index n) { return DiscreteForm(Eigen::VectorXd::Zero(n)); }

    Index size() const { return static_cast<Index>(values_.size()); }
    double operator[](Index i) const { return values_[i]; }
    double& operator[](Index i) { return values_[i]; }

    const Eigen::VectorXd& values() const { return values_; }
    Eigen::VectorXd& values() { return values_; }

    bool all_finite() const { return values_.allFinite(); }

    DiscreteForm& operator+=(const DiscreteForm& o) { values_ += o.values_; return *this; }
    DiscreteForm& operator-=(const DiscreteForm& o) { values_ -= o.values_; return *this; }
    DiscreteForm& operator*=(double s) { values_ *= s; return *this; }

    friend DiscreteForm operator+(DiscreteForm a, const DiscreteForm& b) { return a += b; }
    friend DiscreteForm operator-(DiscreteForm a, const DiscreteForm& b) { return a -= b; }
    friend DiscreteForm operator*(double s, DiscreteForm a) { return a *= s; }

private:
    Eigen::VectorXd values_;
};

using Form0 = DiscreteForm<0>;
using Form1 = DiscreteForm<1>;
using Form2 = DiscreteForm<2>;

// Operator matrices. Every discrete operator below is linear and is
// represented by exactly one of these; the per-form functions apply them.

/// (dq)(e) = q(head) - q(tail). |E| x |V|.
SparseMatrix exterior_derivative_0(const SimplicialComplex& complex);
/// (du)(f) = sum_{ẽ in f} s_{f,ẽ} u(ẽ). |F| x |E|.
SparseMatrix exterior_derivative_1(const SimplicialComplex& complex);
/// Rotated Hodge star on primal 1-forms. |E| x |E|.
SparseMatrix hodge_star_matrix(const SimplicialComplex& complex, const DualGeometry& dual);
/// Vertex divergence (*d*). |V| x |E|.
SparseMatrix divergence_matrix(const SimplicialComplex& complex, const DualGeometry& dual);
/// Curl (*d) as the area mean over the two faces of each edge. |E| x |E|.
SparseMatrix curl_matrix(const SimplicialComplex& complex, const DualGeometry& dual);
/// Rot-rot Laplacian (*d*d) on 1-forms. |E| x |E|.
SparseMatrix laplace_rr_matrix(const SimplicialComplex& complex, const DualGeometry& dual);

/// All operator matrices of one mesh, built once and reused by the solver.
struct DecOperators {
    SparseMatrix d0, d1, hodge, divergence, curl, laplace_rr;

    static DecOperators build(const SimplicialComplex& complex, const DualGeometry& dual);
};

/// u(e) = field(c(e)) . (head - tail), i.e. the midpoint rule for the line
/// integral along e.
Form1 sample_one_form(const VectorField& field, const SimplicialComplex& complex, const DualGeometry& dual);

Form1 d0(const Form0& q, const SimplicialComplex& complex);
Form2 d1(const Form1& u, const SimplicialComplex& complex);
Form1 hodge_star_edge(const Form1& u, const SimplicialComplex& complex, const DualGeometry& dual);
Form0 divergence_vertex(const Form1& u, const SimplicialComplex& complex, const DualGeometry& dual);
/// One value per edge, located at the edge midpoint.
Eigen::VectorXd curl_edge_midpoint(const Form1& u, const SimplicialComplex& complex, const DualGeometry& dual);
Form1 laplace_rr(const Form1& u, const SimplicialComplex& complex, const DualGeometry& dual);

/// ⟨ũ, u⟩ at c(e) from primal values and Hodge duals.
double inner_product_edge(const Form1& u_tilde, const Form1& u, const Form1& star_u_tilde, const Form1& star_u,
                          Index e, const DualGeometry& dual);

/// ⟨ũ, u⟩ at vertex v, weighted over the Voronoi fragments A_ve.
double inner_product_vertex(const Form1& u_tilde, const Form1& u, const Form1& star_u_tilde, const Form1& star_u,
                            Index v, const SimplicialComplex& complex, const DualGeometry& dual);

/// inner_product_vertex for every vertex.
Form0 inner_product_vertices(const Form1& u_tilde, const Form1& u, const Form1& star_u_tilde, const Form1& star_u,
                             const SimplicialComplex& complex, const DualGeometry& dual);

/// Area-weighted unit vertex normals.
std::vector<Vec3> vertex_normals(const SimplicialComplex& complex, const DualGeometry& dual);

/// Per-vertex tangent vectors fitted to the incident edge values in the least
/// squares sense. Throws MeshError on a rank-deficient local system.
std::vector<Vec3> reconstruct_vertex_vectors(const Form1& u, const SimplicialComplex& complex,
                                             const DualGeometry& dual);

} // namespace decflow
