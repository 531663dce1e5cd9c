#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <span>
#include <vector>

namespace decflow {

using Vec3 = Eigen::Vector3d;
using Index = int;

/// Oriented, closed, manifold triangle complex.
///
/// Edges are stored once per undirected vertex pair and always point from the
/// lower to the higher vertex index. Faces carry a globally consistent
/// orientation. Immutable after construction.
class SimplicialComplex {
public:
    SimplicialComplex() = default;

    Index num_vertices() const { return static_cast<Index>(positions_.size()); }
    Index num_edges() const { return static_cast<Index>(edges_.size()); }
    Index num_faces() const { return static_cast<Index>(faces_.size()); }
    int euler_characteristic() const { return num_vertices() - num_edges() + num_faces(); }

    std::span<const Vec3> positions() const { return positions_; }
    const Vec3& position(Index v) const { return positions_[v]; }

    /// Face vertices in orientation order.
    const std::array<Index, 3>& face(Index f) const { return faces_[f]; }
    std::span<const std::array<Index, 3>> faces() const { return faces_; }

    /// Edge as [tail, head]; tail < head.
    const std::array<Index, 2>& edge(Index e) const { return edges_[e]; }
    std::span<const std::array<Index, 2>> edges() const { return edges_; }

    /// Local edge k of a face joins face vertices k and k+1 (mod 3).
    const std::array<Index, 3>& face_edges(Index f) const { return face_edges_[f]; }
    /// s_{f,e} for the local edges of f: +1 when f lies on the left of e.
    const std::array<int, 3>& face_edge_signs(Index f) const { return face_edge_signs_[f]; }

    /// [left face, right face] of an edge.
    const std::array<Index, 2>& edge_faces(Index e) const { return edge_faces_[e]; }

    std::span<const Index> vertex_edges(Index v) const {
        return {vertex_edge_data_.data() + vertex_edge_offsets_[v],
                vertex_edge_data_.data() + vertex_edge_offsets_[v + 1]};
    }
    std::span<const Index> vertex_faces(Index v) const {
        return {vertex_face_data_.data() + vertex_face_offsets_[v],
                vertex_face_data_.data() + vertex_face_offsets_[v + 1]};
    }

    /// head - tail
    Vec3 edge_vector(Index e) const { return positions_[edges_[e][1]] - positions_[edges_[e][0]]; }

    /// Local slot (0..2) of edge e inside face f, or -1.
    int local_edge_index(Index f, Index e) const;

private:
    friend SimplicialComplex build_complex(std::span<const Vec3>, std::span<const std::array<Index, 3>>);

    std::vector<Vec3> positions_;
    std::vector<std::array<Index, 3>> faces_;
    std::vector<std::array<Index, 2>> edges_;
    std::vector<std::array<Index, 3>> face_edges_;
    std::vector<std::array<int, 3>> face_edge_signs_;
    std::vector<std::array<Index, 2>> edge_faces_;
    std::vector<Index> vertex_edge_offsets_, vertex_edge_data_;
    std::vector<Index> vertex_face_offsets_, vertex_face_data_;
};

/// Builds the oriented complex. Orientation is propagated breadth-first from
/// triangle 0 (triangle 0 keeps its given winding). Throws MeshError on
/// out-of-range indices, degenerate triangles, boundary or non-manifold edges,
/// and non-orientable input.
SimplicialComplex build_complex(std::span<const Vec3> positions,
                                std::span<const std::array<Index, 3>> triangles);

/// Sign functions relating simplices. All throw MeshError when the relation
/// does not hold.
int sign_face_edge(const SimplicialComplex& complex, Index f, Index e);
int sign_vertex_edge(const SimplicialComplex& complex, Index v, Index e);
/// s_{e,ẽ} inside face f: +1 iff the counter-clockwise angle (w.r.t. the face
/// orientation) from e to ẽ is below pi.
int sign_edge_edge(const SimplicialComplex& complex, Index f, Index e, Index e_other);
/// Same, with the common face looked up.
int sign_edge_edge(const SimplicialComplex& complex, Index e, Index e_other);

/// Circumcentric dual measures. Dual edge lengths are signed: the segment
/// from c(e) to c(f) counts negative when the circumcenter of f lies on the
/// far side of e.
struct DualGeometry {
    std::vector<Vec3> face_circumcenter;
    std::vector<double> face_circumradius;
    std::vector<double> face_area;
    std::vector<Vec3> face_normal;  // unit, follows face orientation

    std::vector<Vec3> edge_midpoint;
    std::vector<double> primal_edge_length;
    std::vector<std::array<double, 2>> dual_edge_parts;  // [left, right] segment
    std::vector<double> dual_edge_length;
    /// |A_ve| = |e||⋆e|/4; identical for both endpoints of e.
    std::vector<double> cell_fragment_area;

    std::vector<double> voronoi_area;

    /// Maximum circumcircle diameter over all faces.
    double mesh_size() const;
    double total_face_area() const;
    double total_voronoi_area() const;
};

DualGeometry circumcentric_dual(const SimplicialComplex& complex);

struct WellCenteredReport {
    bool passed = true;
    std::vector<Index> obtuse_faces;          // circumcenter strictly outside
    std::vector<Index> nonpositive_dual_edges;
    Index worst_face = -1;                    // face with the largest angle
    double worst_angle = 0.0;                 // radians
};

WellCenteredReport well_centered_report(const SimplicialComplex& complex, const DualGeometry& dual);

/// Interior angle of face f at its local corner k.
double corner_angle(const SimplicialComplex& complex, Index f, int k);

} // namespace decflow
