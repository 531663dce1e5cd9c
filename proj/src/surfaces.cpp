#include "decflow/surfaces.hpp"

#include "decflow/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <utility>

namespace decflow {

namespace {

constexpr double pi = std::numbers::pi;

double cube(double x) { return x * x * x; }

// Biconcave level set along direction d, as a function of s = t^2.
double biconcave_radial(double s, double a, double c, double sigma) {
    const double a2 = a * a;
    return cube(a2 + s) - 4.0 * a2 * s * sigma - c * c * c * c;
}

Vec3 biconcave_project(const Vec3& x, double a, double c) {
    const double len = x.norm();
    if (!(len > 0.0)) throw MeshError("biconcave projection of the origin");
    const Vec3 d = x / len;
    const double sigma = d.y() * d.y() + d.z() * d.z();
    if (!(biconcave_radial(0.0, a, c, sigma) < 0.0)) {
        throw MeshError("biconcave projection: origin is not inside the shape");
    }
    double hi = 1.0;
    while (biconcave_radial(hi, a, c, sigma) <= 0.0) {
        hi *= 2.0;
        if (hi > 1e12) throw MeshError("biconcave projection: root not bracketed");
    }
    std::uintmax_t max_iter = 200;
    const auto f = [&](double s) { return biconcave_radial(s, a, c, sigma); };
    const auto [lo_s, hi_s] =
        boost::math::tools::toms748_solve(f, 0.0, hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
    const double s = 0.5 * (lo_s + hi_s);
    const Vec3 p = std::sqrt(s) * d;
    return p;
}

// Flip every triangle when the first one faces inward.
void orient_outward(TriangleSoup& soup, const SurfaceDescriptor& surface) {
    const auto& t = soup.triangles.front();
    const Vec3& a = soup.positions[t[0]];
    const Vec3 n = (soup.positions[t[1]] - a).cross(soup.positions[t[2]] - a);
    const Vec3 centroid = (a + soup.positions[t[1]] + soup.positions[t[2]]) / 3.0;
    if (n.dot(surface.level_set_gradient(centroid)) < 0.0) {
        for (auto& tri : soup.triangles) std::swap(tri[1], tri[2]);
    }
}

double opposite_angle(const Vec3& apex, const Vec3& a, const Vec3& b) {
    return std::atan2((a - apex).cross(b - apex).norm(), (a - apex).dot(b - apex));
}

// Edge flips until every edge is locally Delaunay (opposite angles sum to at
// most pi), which makes every dual edge length non-negative.
void delaunay_flips(TriangleSoup& soup) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        const auto cx = build_complex(soup.positions, soup.triangles);
        std::vector<std::array<Index, 3>> tris(cx.faces().begin(), cx.faces().end());
        std::set<std::pair<Index, Index>> edges;
        for (const auto& e : cx.edges()) edges.emplace(e[0], e[1]);
        std::vector<char> touched(tris.size(), 0);
        int flips = 0;
        for (Index e = 0; e < cx.num_edges(); ++e) {
            const auto [f, g] = cx.edge_faces(e);
            if (touched[f] || touched[g]) continue;
            const Index a = cx.edge(e)[0], b = cx.edge(e)[1];
            auto apex = [&](Index face) {
                for (Index v : tris[face]) {
                    if (v != a && v != b) return v;
                }
                return Index(-1);
            };
            const Index c = apex(f), d = apex(g);
            const auto& x = soup.positions;
            if (opposite_angle(x[c], x[a], x[b]) + opposite_angle(x[d], x[a], x[b]) <= pi + 1e-12) continue;
            if (edges.count({std::min(c, d), std::max(c, d)})) continue;
            // f runs c -> n1 -> n2; g runs n2 -> n1 -> d.
            int k = 0;
            while (tris[f][k] != c) ++k;
            const Index n1 = tris[f][(k + 1) % 3], n2 = tris[f][(k + 2) % 3];
            tris[f] = {c, n1, d};
            tris[g] = {d, n2, c};
            touched[f] = touched[g] = 1;
            edges.emplace(std::min(c, d), std::max(c, d));
            ++flips;
        }
        soup.triangles = std::move(tris);
        if (flips == 0) return;
    }
    throw MeshError("Delaunay edge flips did not terminate");
}

// Alternates Delaunay flips with area-weighted centroid smoothing projected
// back to the surface. Ends on a flip pass.
void relax_mesh(TriangleSoup& soup, const SurfaceDescriptor& surface, int rounds) {
    for (int round = 0; round < rounds; ++round) {
        delaunay_flips(soup);
        const auto cx = build_complex(soup.positions, soup.triangles);
        for (int it = 0; it < 5; ++it) {
            std::vector<Vec3> moved(soup.positions.size());
            const auto& x = soup.positions;
            for (Index v = 0; v < cx.num_vertices(); ++v) {
                Vec3 sum = Vec3::Zero();
                double weight = 0.0;
                for (Index f : cx.vertex_faces(v)) {
                    const auto& t = cx.face(f);
                    const double area = 0.5 * (x[t[1]] - x[t[0]]).cross(x[t[2]] - x[t[0]]).norm();
                    sum += area * (x[t[0]] + x[t[1]] + x[t[2]]) / 3.0;
                    weight += area;
                }
                moved[v] = surface.project(sum / weight);
            }
            soup.positions = std::move(moved);
        }
    }
    delaunay_flips(soup);
}

} // namespace

std::string to_string(SurfaceKind kind) {
    switch (kind) {
    case SurfaceKind::Sphere: return "sphere";
    case SurfaceKind::Ellipsoid: return "ellipsoid";
    case SurfaceKind::Biconcave: return "biconcave";
    case SurfaceKind::Torus: return "torus";
    case SurfaceKind::ExternalMesh: return "mesh";
    }
    return "unknown";
}

SurfaceKind surface_kind_from_string(const std::string& name) {
    for (auto k : {SurfaceKind::Sphere, SurfaceKind::Ellipsoid, SurfaceKind::Biconcave, SurfaceKind::Torus,
                   SurfaceKind::ExternalMesh}) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("unknown surface kind '" + name + "'");
}

SurfaceDescriptor SurfaceDescriptor::sphere(double radius) {
    SurfaceDescriptor s;
    s.kind = SurfaceKind::Sphere;
    s.radius = radius;
    return s;
}

SurfaceDescriptor SurfaceDescriptor::ellipsoid(double a, double b, double c) {
    SurfaceDescriptor s;
    s.kind = SurfaceKind::Ellipsoid;
    s.a = a;
    s.b = b;
    s.c = c;
    return s;
}

SurfaceDescriptor SurfaceDescriptor::biconcave(double a, double c) {
    SurfaceDescriptor s;
    s.kind = SurfaceKind::Biconcave;
    s.a = a;
    s.c = c;
    return s;
}

SurfaceDescriptor SurfaceDescriptor::torus(double major_radius, double minor_radius) {
    SurfaceDescriptor s;
    s.kind = SurfaceKind::Torus;
    s.major_radius = major_radius;
    s.minor_radius = minor_radius;
    return s;
}

SurfaceDescriptor SurfaceDescriptor::external(std::filesystem::path path) {
    SurfaceDescriptor s;
    s.kind = SurfaceKind::ExternalMesh;
    s.mesh_path = std::move(path);
    return s;
}

void SurfaceDescriptor::validate() const {
    const auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string("surface parameter ") + name + " must be positive");
    };
    switch (kind) {
    case SurfaceKind::Sphere: positive(radius, "radius"); break;
    case SurfaceKind::Ellipsoid:
        positive(a, "a");
        positive(b, "b");
        positive(c, "c");
        break;
    case SurfaceKind::Biconcave:
        positive(a, "a");
        positive(c, "c");
        if (!(std::pow(a, 6) < std::pow(c, 4))) throw ConfigError("biconcave shape requires a^6 < c^4");
        break;
    case SurfaceKind::Torus:
        positive(major_radius, "R");
        positive(minor_radius, "r");
        if (!(major_radius > minor_radius)) throw ConfigError("torus requires R > r");
        break;
    case SurfaceKind::ExternalMesh:
        if (mesh_path.empty()) throw ConfigError("external mesh surface requires a mesh path");
        break;
    }
}

double SurfaceDescriptor::level_set(const Vec3& x) const {
    switch (kind) {
    case SurfaceKind::Sphere: return x.squaredNorm() - radius * radius;
    case SurfaceKind::Ellipsoid: {
        const double ex = x.x() / a, ey = x.y() / b, ez = x.z() / c;
        return ex * ex + ey * ey + ez * ez - 1.0;
    }
    case SurfaceKind::Biconcave: {
        const double a2 = a * a;
        return cube(a2 + x.squaredNorm()) - 4.0 * a2 * (x.y() * x.y() + x.z() * x.z()) - c * c * c * c;
    }
    case SurfaceKind::Torus: {
        const double rho = std::hypot(x.x(), x.z()) - major_radius;
        return rho * rho + x.y() * x.y() - minor_radius * minor_radius;
    }
    case SurfaceKind::ExternalMesh: break;
    }
    throw ConfigError("external meshes have no level set");
}

Vec3 SurfaceDescriptor::level_set_gradient(const Vec3& x) const {
    switch (kind) {
    case SurfaceKind::Sphere: return 2.0 * x;
    case SurfaceKind::Ellipsoid:
        return {2.0 * x.x() / (a * a), 2.0 * x.y() / (b * b), 2.0 * x.z() / (c * c)};
    case SurfaceKind::Biconcave: {
        const double a2 = a * a;
        const double q = 6.0 * std::pow(a2 + x.squaredNorm(), 2);
        return {q * x.x(), (q - 8.0 * a2) * x.y(), (q - 8.0 * a2) * x.z()};
    }
    case SurfaceKind::Torus: {
        const double rho = std::hypot(x.x(), x.z());
        const double k = 2.0 * (rho - major_radius) / rho;
        return {k * x.x(), 2.0 * x.y(), k * x.z()};
    }
    case SurfaceKind::ExternalMesh: break;
    }
    throw ConfigError("external meshes have no level set");
}

Vec3 SurfaceDescriptor::normal(const Vec3& x) const { return level_set_gradient(x).normalized(); }

Vec3 SurfaceDescriptor::project(const Vec3& x) const {
    switch (kind) {
    case SurfaceKind::Sphere: return radius * x.normalized();
    case SurfaceKind::Ellipsoid: return x / std::sqrt(level_set(x) + 1.0);
    case SurfaceKind::Biconcave: return biconcave_project(x, a, c);
    case SurfaceKind::Torus: {
        const double rho = std::hypot(x.x(), x.z());
        const Vec3 center(major_radius * x.x() / rho, 0.0, major_radius * x.z() / rho);
        return center + minor_radius * (x - center).normalized();
    }
    case SurfaceKind::ExternalMesh: break;
    }
    throw ConfigError("external meshes cannot project points");
}

double SurfaceDescriptor::feature_size() const {
    switch (kind) {
    case SurfaceKind::Sphere: return radius;
    case SurfaceKind::Ellipsoid: return std::min({a, b, c});
    case SurfaceKind::Biconcave: return std::min(a, c);
    case SurfaceKind::Torus: return minor_radius;
    case SurfaceKind::ExternalMesh: break;
    }
    return 1.0;
}

TriangleSoup geodesic_sphere(int frequency, double radius) {
    if (frequency < 1) throw MeshError("sphere frequency must be >= 1");
    const double phi = std::numbers::phi;
    std::vector<Vec3> ico;
    for (double s1 : {-1.0, 1.0}) {
        for (double s2 : {-1.0, 1.0}) {
            ico.emplace_back(0.0, s1, s2 * phi);
            ico.emplace_back(s1, s2 * phi, 0.0);
            ico.emplace_back(s2 * phi, 0.0, s1);
        }
    }
    // Faces are the vertex triples at mutual distance 2.
    std::vector<std::array<Index, 3>> ico_faces;
    const auto adjacent = [&](int i, int j) { return std::abs((ico[i] - ico[j]).norm() - 2.0) < 1e-9; };
    for (int i = 0; i < 12; ++i)
        for (int j = i + 1; j < 12; ++j)
            for (int k = j + 1; k < 12; ++k)
                if (adjacent(i, j) && adjacent(j, k) && adjacent(i, k)) {
                    const Vec3 n = (ico[j] - ico[i]).cross(ico[k] - ico[i]);
                    if (n.dot(ico[i]) > 0.0) ico_faces.push_back({i, j, k});
                    else ico_faces.push_back({i, k, j});
                }

    // Lattice points keyed by their exact integer barycentric representation
    // over icosahedron vertices, so shared edges produce shared vertices.
    using Key = std::vector<std::pair<int, int>>;
    std::map<Key, Index> lookup;
    TriangleSoup soup;
    const int n = frequency;
    const auto vertex_at = [&](const std::array<Index, 3>& face, int i, int j) {
        const int k = n - i - j;
        Key key;
        const int weights[3] = {k, i, j};
        for (int m = 0; m < 3; ++m) {
            if (weights[m] > 0) key.emplace_back(face[m], weights[m]);
        }
        std::sort(key.begin(), key.end());
        auto [it, inserted] = lookup.try_emplace(key, static_cast<Index>(soup.positions.size()));
        if (inserted) {
            Vec3 p = Vec3::Zero();
            for (auto [v, w] : key) p += w * ico[v];
            soup.positions.push_back(radius * p.normalized());
        }
        return it->second;
    };
    for (const auto& face : ico_faces) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i + j < n; ++i) {
                const Index a = vertex_at(face, i, j);
                const Index b = vertex_at(face, i + 1, j);
                const Index c = vertex_at(face, i, j + 1);
                soup.triangles.push_back({a, b, c});
                if (i + j + 1 < n) {
                    const Index d = vertex_at(face, i + 1, j + 1);
                    soup.triangles.push_back({b, d, c});
                }
            }
        }
    }
    return soup;
}

int torus_phi_count(double major_radius, double minor_radius, int n_theta) {
    // Equilateral along the centre circle: R dphi = (2/sqrt 3) r dtheta.
    const int n = static_cast<int>(std::lround(n_theta * major_radius * std::sqrt(3.0) / (2.0 * minor_radius)));
    return std::max(4, n + (n % 2));
}

TriangleSoup torus_grid(double major_radius, double minor_radius, int n_phi, int n_theta, bool shift_rows) {
    if (n_phi < 3 || n_theta < 3) throw MeshError("torus grid needs at least 3 samples per direction");
    if (shift_rows && n_theta % 2 != 0) throw MeshError("shifted torus grid needs an even theta count");
    TriangleSoup soup;
    const auto id = [&](int i, int j) {
        return static_cast<Index>(((j + n_theta) % n_theta) * n_phi + ((i + n_phi) % n_phi));
    };
    for (int j = 0; j < n_theta; ++j) {
        const double theta = 2.0 * pi * j / n_theta;
        const double offset = (shift_rows && j % 2 == 1) ? 0.5 : 0.0;
        for (int i = 0; i < n_phi; ++i) {
            const double phi = 2.0 * pi * (i + offset) / n_phi;
            const double rho = major_radius + minor_radius * std::cos(theta);
            soup.positions.emplace_back(rho * std::cos(phi), minor_radius * std::sin(theta), rho * std::sin(phi));
        }
    }
    for (int j = 0; j < n_theta; ++j) {
        for (int i = 0; i < n_phi; ++i) {
            const Index a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            bool split_ac;
            if (shift_rows) {
                // Odd rows sit half a step ahead of even rows.
                split_ac = (j % 2 == 1);
            } else {
                split_ac = ((i + j) % 2 == 0);
            }
            if (split_ac) {
                soup.triangles.push_back({a, b, c});
                soup.triangles.push_back({a, c, d});
            } else {
                soup.triangles.push_back({a, b, d});
                soup.triangles.push_back({b, c, d});
            }
        }
    }
    return soup;
}

TriangleSoup generate_triangles(const SurfaceDescriptor& surface, int resolution) {
    surface.validate();
    TriangleSoup soup;
    switch (surface.kind) {
    case SurfaceKind::Sphere: soup = geodesic_sphere(resolution, surface.radius); break;
    case SurfaceKind::Ellipsoid:
        // Scaling the geodesic sphere stretches its triangles by c/a; flips
        // and smoothing restore a Delaunay mesh with near-regular triangles.
        soup = geodesic_sphere(resolution, 1.0);
        for (auto& p : soup.positions) p = Vec3(surface.a * p.x(), surface.b * p.y(), surface.c * p.z());
        relax_mesh(soup, surface, 10);
        break;
    case SurfaceKind::Biconcave:
        soup = geodesic_sphere(resolution, 1.0);
        for (auto& p : soup.positions) {
            p = surface.project(p);
            if (!(std::abs(surface.level_set(p)) < 1e-10)) {
                throw MeshError("biconcave projection did not converge");
            }
        }
        break;
    case SurfaceKind::Torus: {
        if (resolution < 8) throw MeshError("torus resolution must be >= 8");
        const int n_theta = resolution + (resolution % 2);
        soup = torus_grid(surface.major_radius, surface.minor_radius,
                          torus_phi_count(surface.major_radius, surface.minor_radius, n_theta), n_theta);
        break;
    }
    case SurfaceKind::ExternalMesh: return load_mesh_file(surface.mesh_path);
    }
    orient_outward(soup, surface);
    return soup;
}

SimplicialComplex generate_mesh(const SurfaceDescriptor& surface, int resolution) {
    const auto soup = generate_triangles(surface, resolution);
    return build_complex(soup.positions, soup.triangles);
}

std::string to_string(InitialCondition::Kind kind) {
    switch (kind) {
    case InitialCondition::Kind::Zero: return "zero";
    case InitialCondition::Kind::KillingSphere: return "killing_sphere";
    case InitialCondition::Kind::StreamCurl: return "stream_curl";
    case InitialCondition::Kind::HarmonicTorus: return "harmonic_torus";
    case InitialCondition::Kind::Custom: return "custom";
    }
    return "unknown";
}

InitialCondition::Kind initial_condition_kind_from_string(const std::string& name) {
    using K = InitialCondition::Kind;
    for (auto k : {K::Zero, K::KillingSphere, K::StreamCurl, K::HarmonicTorus}) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("unknown initial condition '" + name + "'");
}

Vec3 torus_d_phi(const Vec3& x) { return {-x.z(), 0.0, x.x()}; }

Vec3 torus_d_theta(const Vec3& x, double major_radius) {
    const double rho = std::hypot(x.x(), x.z());
    return {-x.x() * x.y() / rho, rho - major_radius, -x.y() * x.z() / rho};
}

Vec3 torus_harmonic_phi(const Vec3& x) {
    return torus_d_phi(x) / (4.0 * (x.x() * x.x() + x.z() * x.z()));
}

Vec3 torus_harmonic_theta(const Vec3& x, double major_radius) {
    return torus_d_theta(x, major_radius) / (2.0 * std::hypot(x.x(), x.z()));
}

double torus_theta(const Vec3& x, double major_radius) {
    double theta = std::atan2(x.y(), std::hypot(x.x(), x.z()) - major_radius);
    if (theta < 0.0) theta += 2.0 * pi;
    return theta;
}

double stream_function_torus_phi(double theta) { return -0.25 * std::sin(theta) + theta - pi; }

double stream_function_torus_phi(const Vec3& x, double major_radius) {
    return stream_function_torus_phi(torus_theta(x, major_radius));
}

VectorField initial_velocity(const InitialCondition& ic, const SurfaceDescriptor& surface) {
    using K = InitialCondition::Kind;
    if (ic.kind == K::Custom) {
        if (!ic.custom) throw ConfigError("custom initial condition without a field");
        return ic.custom;
    }
    if (ic.kind == K::Zero) return [](const Vec3&) { return Vec3::Zero().eval(); };
    if (!surface.is_analytic()) {
        throw ConfigError("initial condition '" + to_string(ic.kind) + "' needs an analytic surface");
    }
    if (ic.kind == K::KillingSphere && surface.kind != SurfaceKind::Sphere) {
        throw ConfigError("killing_sphere initial condition requires the sphere");
    }
    if (ic.kind == K::HarmonicTorus && surface.kind != SurfaceKind::Torus) {
        throw ConfigError("harmonic_torus initial condition requires the torus");
    }
    const double tolerance = 0.25 * surface.feature_size();
    return [ic, surface, tolerance](const Vec3& x) -> Vec3 {
        const Vec3 p = surface.project(x);
        if ((p - x).norm() > tolerance) throw ConfigError("initial velocity evaluated off the surface");
        switch (ic.kind) {
        case K::KillingSphere: return {p.y(), -p.x(), 0.0};
        case K::StreamCurl: return surface.normal(p).cross(ic.stream_gradient);
        case K::HarmonicTorus:
            return ic.alpha * torus_harmonic_phi(p) + ic.beta * torus_harmonic_theta(p, surface.major_radius);
        default: return Vec3::Zero();
        }
    };
}

} // namespace decflow
