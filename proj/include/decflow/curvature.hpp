#pragma once

#include "decflow/mesh.hpp"
#include "decflow/surfaces.hpp"

#include <vector>

namespace decflow {

enum class CurvatureSource { Analytic, AngleDefect };

/// Gaussian curvature sampled at vertices and at edge midpoints.
struct CurvatureField {
    std::vector<double> vertex_kappa;
    std::vector<double> edge_kappa;
    CurvatureSource source = CurvatureSource::Analytic;
};

/// Closed-form Gaussian curvature of a catalog surface (sphere, ellipsoid,
/// torus) at the surface projection of a point.
double gaussian_curvature(const SurfaceDescriptor& surface, const Vec3& x);

/// Analytic curvature at vertices and edge midpoints. Throws ConfigError for
/// surfaces without a closed form (biconcave, external meshes).
CurvatureField kappa_analytic(const SurfaceDescriptor& surface, const SimplicialComplex& complex,
                              const DualGeometry& dual);

/// 2 pi minus the angle sum at each vertex.
std::vector<double> angle_defects(const SimplicialComplex& complex);

/// Angle defect over Voronoi area at vertices; edges take the endpoint mean.
CurvatureField kappa_angle_defect(const SimplicialComplex& complex, const DualGeometry& dual);

} // namespace decflow
