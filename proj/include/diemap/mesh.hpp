#pragma once

#include "diemap/geometry.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <vector>

namespace diemap {

using FacetId = std::uint32_t;
using VertexId = std::uint32_t;

inline constexpr FacetId kNoFacet = std::numeric_limits<FacetId>::max();

struct MeshHygiene {
    double weld_epsilon = 1e-6;            // mm
    double degenerate_area_epsilon = 1e-12; // mm^2
};

enum class StlEncoding { Ascii, Binary };

/// What happened while turning raw triangles into an indexed mesh.
struct MeshDiagnostics {
    std::size_t source_facets = 0;
    std::size_t dropped_degenerate = 0;
    std::size_t welded_vertices = 0; // corners merged into an earlier vertex
    std::size_t non_manifold_edges = 0;
    std::size_t boundary_edges = 0;
};

/// Undirected edge keyed by its sorted vertex pair.
struct Edge {
    VertexId a = 0;
    VertexId b = 0;

    auto operator<=>(const Edge&) const = default;
};

/// Indexed triangle set with unit facet normals and full-edge adjacency.
///
/// Immutable after construction. Neighbor slot k of a facet refers to the
/// edge from corner k to corner (k + 1) % 3; the slot holds kNoFacet for
/// border edges and for severed non-manifold edges.
class TriangleMesh {
public:
    TriangleMesh() = default;

    /// Welds corners closer than `weld_epsilon`, recomputes normals from the
    /// winding and drops facets below `degenerate_area_epsilon`. Throws
    /// EmptyMesh when nothing survives.
    static TriangleMesh from_triangles(std::span<const Triangle> triangles,
                                       const MeshHygiene& hygiene = {});

    /// Indexed input; vertices are still welded so adjacency can be built.
    static TriangleMesh from_indexed(std::span<const Vec3> vertices,
                                     std::span<const std::array<VertexId, 3>> facets,
                                     const MeshHygiene& hygiene = {});

    std::size_t facet_count() const noexcept { return facets_.size(); }
    std::size_t vertex_count() const noexcept { return vertices_.size(); }

    const std::vector<Vec3>& vertices() const noexcept { return vertices_; }
    const std::vector<std::array<VertexId, 3>>& facets() const noexcept { return facets_; }
    const std::vector<Vec3>& normals() const noexcept { return normals_; }
    const std::vector<double>& areas() const noexcept { return areas_; }
    const std::vector<std::array<FacetId, 3>>& adjacency() const noexcept { return adjacency_; }
    const MeshDiagnostics& diagnostics() const noexcept { return diagnostics_; }

    const Vec3& normal(FacetId f) const { return normals_[f]; }
    double area(FacetId f) const { return areas_[f]; }
    const std::array<FacetId, 3>& neighbor_slots(FacetId f) const { return adjacency_[f]; }
    std::size_t neighbor_count(FacetId f) const;
    Edge edge(FacetId f, int slot) const;
    Vec3 centroid(FacetId f) const;
    double total_area() const;

private:
    friend void build_adjacency(TriangleMesh& mesh);

    std::vector<Vec3> vertices_;
    std::vector<std::array<VertexId, 3>> facets_;
    std::vector<Vec3> normals_;
    std::vector<double> areas_;
    std::vector<std::array<FacetId, 3>> adjacency_;
    MeshDiagnostics diagnostics_;
};

/// Links facets across edges that have exactly two incident facets. Edges
/// with three or more incident facets are counted in
/// diagnostics().non_manifold_edges and left unlinked.
void build_adjacency(TriangleMesh& mesh);

struct StlData {
    std::vector<Triangle> triangles;
    StlEncoding encoding = StlEncoding::Binary;
};

/// Raw STL reader. ASCII is attempted when the file starts with "solid";
/// anything that does not parse as ASCII is read as binary.
StlData read_stl(const std::filesystem::path& path);
StlData parse_stl(std::span<const std::byte> bytes);

TriangleMesh load_stl(const std::filesystem::path& path, const MeshHygiene& hygiene = {});

void write_stl_binary(const std::filesystem::path& path, std::span<const Triangle> triangles);
void write_stl_ascii(const std::filesystem::path& path, std::span<const Triangle> triangles);

} // namespace diemap
