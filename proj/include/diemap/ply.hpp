#pragma once

#include "diemap/mesh.hpp"
#include "diemap/speed_map.hpp"

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace diemap {

/// ASCII PLY with per-face RGB. Vertices carry x y z as doubles; faces carry
/// a uchar-counted int index list followed by red green blue as uchar.
void export_colored_mesh(const TriangleMesh& mesh, std::span<const Rgb> colors, const std::filesystem::path& path,
                         const std::string& comment = {});

struct ColoredPly {
    std::vector<Vec3> vertices;
    std::vector<std::array<VertexId, 3>> faces;
    std::vector<Rgb> colors;
};

/// Reads back what export_colored_mesh writes. Throws MalformedPly.
ColoredPly read_colored_ply(const std::filesystem::path& path);

} // namespace diemap
