#pragma once

#include "decflow/mesh.hpp"

#include <filesystem>
#include <iosfwd>

namespace decflow {

/// Raw triangle data as read from disk, indices 0-based.
struct TriangleSoup {
    std::vector<Vec3> positions;
    std::vector<std::array<Index, 3>> triangles;
};

TriangleSoup read_off(std::istream& in);
TriangleSoup read_obj(std::istream& in);

/// Dispatches on the file extension (.off / .obj, case-insensitive).
TriangleSoup load_mesh_file(const std::filesystem::path& path);

void write_off(std::ostream& out, const SimplicialComplex& complex);

} // namespace decflow
