#pragma once

#include "decflow/forms.hpp"
#include "decflow/mesh.hpp"
#include "decflow/mesh_io.hpp"

#include <filesystem>
#include <string>

namespace decflow {

enum class SurfaceKind { Sphere, Ellipsoid, Biconcave, Torus, ExternalMesh };

std::string to_string(SurfaceKind kind);
SurfaceKind surface_kind_from_string(const std::string& name);

/// Analytic surface of the catalog, or a mesh file.
///
/// Parameters used per kind: sphere `radius`; ellipsoid semi-axes `a, b, c`;
/// biconcave `a, c` in the level set (a^2+|x|^2)^3 - 4a^2(y^2+z^2) - c^4;
/// torus `major_radius, minor_radius` with symmetry axis y.
struct SurfaceDescriptor {
    SurfaceKind kind = SurfaceKind::Sphere;
    double radius = 1.0;
    double a = 0.5, b = 0.5, c = 1.5;
    double major_radius = 2.0, minor_radius = 0.5;
    std::filesystem::path mesh_path;

    static SurfaceDescriptor sphere(double radius = 1.0);
    static SurfaceDescriptor ellipsoid(double a = 0.5, double b = 0.5, double c = 1.5);
    static SurfaceDescriptor biconcave(double a = 0.72, double c = 0.75);
    static SurfaceDescriptor torus(double major_radius = 2.0, double minor_radius = 0.5);
    static SurfaceDescriptor external(std::filesystem::path path);

    /// Throws ConfigError on non-positive parameters or R <= r.
    void validate() const;

    bool is_analytic() const { return kind != SurfaceKind::ExternalMesh; }

    /// Level set function, negative inside.
    double level_set(const Vec3& x) const;
    Vec3 level_set_gradient(const Vec3& x) const;
    /// Unit outward normal of the level set through x.
    Vec3 normal(const Vec3& x) const;
    /// Closest point for sphere and torus; radial projection for ellipsoid
    /// and biconcave shapes.
    Vec3 project(const Vec3& x) const;
    /// Length scale used for off-surface tolerances.
    double feature_size() const;
};

/// Geodesic icosphere: every icosahedron face is split into frequency^2
/// triangles, then vertices are projected radially. Frequency 2^L equals
/// L levels of midpoint subdivision combinatorially.
TriangleSoup geodesic_sphere(int frequency, double radius = 1.0);

/// Structured (phi, theta) torus with n_phi * n_theta vertices. With
/// `shift_rows` every other theta ring is rotated by half a phi step, which
/// makes the triangles nearly equilateral; otherwise quads are split with
/// alternating diagonals.
TriangleSoup torus_grid(double major_radius, double minor_radius, int n_phi, int n_theta, bool shift_rows = true);

/// Number of phi samples giving near-equilateral triangles for n_theta rings.
int torus_phi_count(double major_radius, double minor_radius, int n_theta);

/// Builds the catalog mesh (resolution = geodesic frequency for sphere-based
/// shapes, n_theta for the torus) or loads the external mesh file.
SimplicialComplex generate_mesh(const SurfaceDescriptor& surface, int resolution);

/// Same as generate_mesh but returns the raw triangles.
TriangleSoup generate_triangles(const SurfaceDescriptor& surface, int resolution);

struct InitialCondition {
    enum class Kind { Zero, KillingSphere, StreamCurl, HarmonicTorus, Custom };

    Kind kind = Kind::KillingSphere;
    /// StreamCurl uses the linear stream function psi(x) = gradient . x.
    Vec3 stream_gradient = Vec3(0.0, 0.0, 1.0);
    /// HarmonicTorus: alpha * v_phi^harm + beta * v_theta^harm.
    double alpha = 0.5, beta = 0.5;
    VectorField custom;

    static InitialCondition of_kind(Kind kind) {
        InitialCondition ic;
        ic.kind = kind;
        return ic;
    }
    static InitialCondition zero() { return of_kind(Kind::Zero); }
    static InitialCondition killing_sphere() { return of_kind(Kind::KillingSphere); }
    static InitialCondition stream_curl(const Vec3& gradient) {
        InitialCondition ic = of_kind(Kind::StreamCurl);
        ic.stream_gradient = gradient;
        return ic;
    }
    static InitialCondition harmonic_torus(double alpha, double beta) {
        InitialCondition ic = of_kind(Kind::HarmonicTorus);
        ic.alpha = alpha;
        ic.beta = beta;
        return ic;
    }
};

std::string to_string(InitialCondition::Kind kind);
InitialCondition::Kind initial_condition_kind_from_string(const std::string& name);

/// Closed-form tangential velocity. Rot psi is realised as n x grad_S psi,
/// which reproduces psi = z -> (y, -x, 0) on the unit sphere. The returned
/// map evaluates at the surface projection of its argument and throws
/// ConfigError for points farther than 0.25 feature sizes from the surface.
VectorField initial_velocity(const InitialCondition& ic, const SurfaceDescriptor& surface);

/// Torus basis fields (R = 2, r = 0.5 normalisation of the harmonic fields).
Vec3 torus_d_phi(const Vec3& x);
Vec3 torus_d_theta(const Vec3& x, double major_radius);
Vec3 torus_harmonic_phi(const Vec3& x);
Vec3 torus_harmonic_theta(const Vec3& x, double major_radius);

/// Angle theta in [0, 2 pi) of a torus point, measured from the outer equator.
double torus_theta(const Vec3& x, double major_radius);

/// psi(theta) = -sin(theta)/4 + theta - pi: multivalued stream function of
/// d_phi x, discontinuous across theta = 0.
double stream_function_torus_phi(double theta);
double stream_function_torus_phi(const Vec3& x, double major_radius);

} // namespace decflow
