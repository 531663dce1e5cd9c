#include "decflow/curvature.hpp"

#include "decflow/error.hpp"

#include <cmath>
#include <numbers>

namespace decflow {

double gaussian_curvature(const SurfaceDescriptor& surface, const Vec3& x) {
    switch (surface.kind) {
    case SurfaceKind::Sphere: return 1.0 / (surface.radius * surface.radius);
    case SurfaceKind::Ellipsoid: {
        const Vec3 p = surface.project(x);
        const double a2 = surface.a * surface.a, b2 = surface.b * surface.b, c2 = surface.c * surface.c;
        const double s = p.x() * p.x() / (a2 * a2) + p.y() * p.y() / (b2 * b2) + p.z() * p.z() / (c2 * c2);
        return 1.0 / (a2 * b2 * c2 * s * s);
    }
    case SurfaceKind::Torus: {
        const Vec3 p = surface.project(x);
        const double r = surface.minor_radius;
        const double rho = std::hypot(p.x(), p.z());
        const double cos_theta = (rho - surface.major_radius) / r;
        return cos_theta / (r * rho);
    }
    case SurfaceKind::Biconcave:
    case SurfaceKind::ExternalMesh: break;
    }
    throw ConfigError("no closed-form curvature for surface '" + to_string(surface.kind) + "'");
}

CurvatureField kappa_analytic(const SurfaceDescriptor& surface, const SimplicialComplex& complex,
                              const DualGeometry& dual) {
    CurvatureField field;
    field.source = CurvatureSource::Analytic;
    field.vertex_kappa.resize(complex.num_vertices());
    field.edge_kappa.resize(complex.num_edges());
    for (Index v = 0; v < complex.num_vertices(); ++v) {
        field.vertex_kappa[v] = gaussian_curvature(surface, complex.position(v));
    }
    for (Index e = 0; e < complex.num_edges(); ++e) {
        field.edge_kappa[e] = gaussian_curvature(surface, dual.edge_midpoint[e]);
    }
    return field;
}

std::vector<double> angle_defects(const SimplicialComplex& complex) {
    std::vector<double> defect(complex.num_vertices(), 2.0 * std::numbers::pi);
    for (Index f = 0; f < complex.num_faces(); ++f) {
        for (int k = 0; k < 3; ++k) defect[complex.face(f)[k]] -= corner_angle(complex, f, k);
    }
    return defect;
}

CurvatureField kappa_angle_defect(const SimplicialComplex& complex, const DualGeometry& dual) {
    CurvatureField field;
    field.source = CurvatureSource::AngleDefect;
    field.vertex_kappa = angle_defects(complex);
    for (Index v = 0; v < complex.num_vertices(); ++v) field.vertex_kappa[v] /= dual.voronoi_area[v];
    field.edge_kappa.resize(complex.num_edges());
    for (Index e = 0; e < complex.num_edges(); ++e) {
        const auto& ed = complex.edge(e);
        field.edge_kappa[e] = 0.5 * (field.vertex_kappa[ed[0]] + field.vertex_kappa[ed[1]]);
    }
    return field;
}

} // namespace decflow
