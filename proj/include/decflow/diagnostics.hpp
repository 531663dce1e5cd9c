#pragma once

#include "decflow/forms.hpp"
#include "decflow/mesh.hpp"
#include "decflow/state.hpp"

#include <vector>

namespace decflow {

struct Vortex {
    Vec3 position;
    double strength = 0.0;
    Index face = -1;
};

struct VortexTrack {
    std::vector<Vortex> vortices;
    /// Set when fewer extrema exist than were requested.
    bool warning = false;
};

struct DiagnosticsRecord {
    double time = 0.0;
    long step_index = 0;
    double kinetic_energy = 0.0;
    double divergence_residual = 0.0;
    double curl_max = 0.0;
    double solver_residual = 0.0;
    VortexTrack vortices;
};

/// E = 1/2 sum_v |⋆v| ⟨u,u⟩(v).
double kinetic_energy(const SolverState& state, const SimplicialComplex& complex, const DualGeometry& dual);

/// sum_v |⋆v| ⟨u,v⟩(v), the discrete L2 product of two velocity fields.
double l2_inner_product(const Form1& u, const Form1& star_u, const Form1& v, const Form1& star_v,
                        const SimplicialComplex& complex, const DualGeometry& dual);

/// l2 product normalised by both norms; 0 if either field vanishes.
double cosine_similarity(const Form1& u, const Form1& star_u, const Form1& v, const Form1& star_v,
                         const SimplicialComplex& complex, const DualGeometry& dual);

struct Vorticity {
    Eigen::VectorXd edge;  // curl at edge midpoints
    Eigen::VectorXd face;  // (du)(f) / |f|
};

Vorticity vorticity_form(const SolverState& state, const SimplicialComplex& complex, const DualGeometry& dual);

/// The `count` strongest local extrema of the face vorticity. A face is a
/// maximum if its value is positive and exceeds every edge-adjacent face,
/// a minimum likewise with negative values; equal values are ordered by face
/// index. Results are sorted by |strength|, then by face index; an extremum
/// sharing a vertex with a stronger one of the same sign is dropped.
VortexTrack track_vortices(const Eigen::VectorXd& face_vorticity, const SimplicialComplex& complex,
                           const DualGeometry& dual, int count);

/// EOC_i = ln(err_{i-1}/err_i) / ln(h_{i-1}/h_i). Needs at least two
/// entries, strictly decreasing h and positive errors.
std::vector<double> eoc_table(const std::vector<double>& errors, const std::vector<double>& mesh_sizes);

/// Shortest path lengths along mesh edges from `source`, which enters the
/// graph at its nearest vertex. An upper bound for the geodesic distance.
std::vector<double> edge_path_distances(const SimplicialComplex& complex, const Vec3& source);

/// Edge-path distance between two points near the mesh; each point is
/// attached to the mesh through its nearest vertex.
double edge_path_distance(const SimplicialComplex& complex, const Vec3& a, const Vec3& b);

Index nearest_vertex(const SimplicialComplex& complex, const Vec3& x);

DiagnosticsRecord compute_diagnostics(const SolverState& state, const SimplicialComplex& complex,
                                      const DualGeometry& dual, int vortex_count = 2);

} // namespace decflow
