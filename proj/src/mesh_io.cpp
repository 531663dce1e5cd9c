#include "decflow/mesh_io.hpp"

#include "decflow/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace decflow {

namespace {

// Next line that is neither blank nor a comment, with trailing comments cut.
bool next_content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
}

void append_polygon(TriangleSoup& soup, const std::vector<Index>& poly, std::size_t line_no) {
    if (poly.size() < 3) {
        throw MeshError("polygon with fewer than 3 vertices near line " + std::to_string(line_no));
    }
    for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        soup.triangles.push_back({poly[0], poly[k], poly[k + 1]});
    }
}

} // namespace

TriangleSoup read_off(std::istream& in) {
    std::string line;
    if (!next_content_line(in, line)) throw MeshError("OFF: empty input");
    std::istringstream header(line);
    std::string magic;
    header >> magic;
    if (magic != "OFF") throw MeshError("OFF: missing 'OFF' header");

    long nv = -1, nf = -1, ne = 0;
    if (!(header >> nv >> nf >> ne)) {
        if (!next_content_line(in, line)) throw MeshError("OFF: missing counts");
        std::istringstream counts(line);
        if (!(counts >> nv >> nf)) throw MeshError("OFF: malformed counts line");
    }
    if (nv < 0 || nf < 0) throw MeshError("OFF: negative counts");

    TriangleSoup soup;
    soup.positions.reserve(nv);
    for (long i = 0; i < nv; ++i) {
        if (!next_content_line(in, line)) throw MeshError("OFF: truncated vertex list");
        std::istringstream ls(line);
        Vec3 p;
        if (!(ls >> p.x() >> p.y() >> p.z())) throw MeshError("OFF: malformed vertex " + std::to_string(i));
        soup.positions.push_back(p);
    }
    for (long i = 0; i < nf; ++i) {
        if (!next_content_line(in, line)) throw MeshError("OFF: truncated face list");
        std::istringstream ls(line);
        long count = 0;
        if (!(ls >> count) || count < 3) throw MeshError("OFF: malformed face " + std::to_string(i));
        std::vector<Index> poly(count);
        for (auto& v : poly) {
            if (!(ls >> v)) throw MeshError("OFF: malformed face " + std::to_string(i));
        }
        append_polygon(soup, poly, i);
    }
    return soup;
}

TriangleSoup read_obj(std::istream& in) {
    TriangleSoup soup;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x() >> p.y() >> p.z())) {
                throw MeshError("OBJ: malformed vertex at line " + std::to_string(line_no));
            }
            soup.positions.push_back(p);
        } else if (tag == "f") {
            std::vector<Index> poly;
            std::string token;
            while (ls >> token) {
                // v, v/vt, v//vn, v/vt/vn; negative indices are relative.
                const long raw = std::stol(token.substr(0, token.find('/')));
                const long n = static_cast<long>(soup.positions.size());
                const long idx = raw > 0 ? raw - 1 : n + raw;
                poly.push_back(static_cast<Index>(idx));
            }
            append_polygon(soup, poly, line_no);
        }
    }
    return soup;
}

TriangleSoup load_mesh_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh file " + path.string());
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".off") return read_off(in);
    if (ext == ".obj") return read_obj(in);
    throw MeshError("unsupported mesh format '" + ext + "' (expected .off or .obj)");
}

void write_off(std::ostream& out, const SimplicialComplex& complex) {
    out << "OFF\n" << complex.num_vertices() << ' ' << complex.num_faces() << ' ' << complex.num_edges() << '\n';
    out << std::setprecision(17);
    for (const Vec3& p : complex.positions()) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
    for (const auto& f : complex.faces()) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

} // namespace decflow
