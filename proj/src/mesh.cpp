#include "diemap/mesh.hpp"

#include "diemap/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace diemap {

namespace {

constexpr const char* kModule = "mesh_core";

struct CellKey {
    std::int64_t x, y, z;
    bool operator==(const CellKey&) const = default;
};

struct CellHash {
    std::size_t operator()(const CellKey& k) const noexcept
    {
        std::uint64_t h = 1469598103934665603ull;
        for (std::int64_t v : {k.x, k.y, k.z}) {
            h ^= static_cast<std::uint64_t>(v);
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

struct Welded {
    std::vector<Vec3> vertices;
    std::vector<VertexId> remap;
};

// Merges points within `eps` of an earlier representative. Grid cells have
// width eps, so any match lies in one of the 27 surrounding cells.
Welded weld(std::span<const Vec3> points, double eps)
{
    Welded out;
    out.remap.resize(points.size());

    if (eps <= 0.0) {
        std::map<std::array<double, 3>, VertexId> exact;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const Vec3& p = points[i];
            auto [it, inserted] = exact.try_emplace({p.x, p.y, p.z}, static_cast<VertexId>(out.vertices.size()));
            if (inserted) {
                out.vertices.push_back(p);
            }
            out.remap[i] = it->second;
        }
        return out;
    }

    std::unordered_map<CellKey, std::vector<VertexId>, CellHash> grid;
    grid.reserve(points.size());
    const double eps2 = eps * eps;
    auto cell_of = [eps](const Vec3& p) {
        return CellKey{static_cast<std::int64_t>(std::floor(p.x / eps)),
                       static_cast<std::int64_t>(std::floor(p.y / eps)),
                       static_cast<std::int64_t>(std::floor(p.z / eps))};
    };

    for (std::size_t i = 0; i < points.size(); ++i) {
        const Vec3& p = points[i];
        const CellKey c = cell_of(p);
        VertexId found = std::numeric_limits<VertexId>::max();
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                for (std::int64_t dz = -1; dz <= 1; ++dz) {
                    auto it = grid.find({c.x + dx, c.y + dy, c.z + dz});
                    if (it == grid.end()) {
                        continue;
                    }
                    for (VertexId v : it->second) {
                        const Vec3 d = out.vertices[v] - p;
                        if (dot(d, d) <= eps2 && v < found) {
                            found = v;
                        }
                    }
                }
            }
        }
        if (found == std::numeric_limits<VertexId>::max()) {
            found = static_cast<VertexId>(out.vertices.size());
            out.vertices.push_back(p);
            grid[c].push_back(found);
        }
        out.remap[i] = found;
    }
    return out;
}

void assemble(std::span<const Vec3> corner_points,
              std::span<const std::array<VertexId, 3>> raw_facets,
              const MeshHygiene& hygiene,
              std::vector<Vec3>& vertices,
              std::vector<std::array<VertexId, 3>>& facets,
              std::vector<Vec3>& normals,
              std::vector<double>& areas,
              MeshDiagnostics& diag)
{
    Welded welded = weld(corner_points, hygiene.weld_epsilon);
    diag.source_facets = raw_facets.size();
    diag.welded_vertices = corner_points.size() - welded.vertices.size();

    // Compact to referenced vertices in first-use order.
    std::vector<VertexId> compact(welded.vertices.size(), std::numeric_limits<VertexId>::max());
    for (const auto& raw : raw_facets) {
        std::array<VertexId, 3> f{welded.remap[raw[0]], welded.remap[raw[1]], welded.remap[raw[2]]};
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
            ++diag.dropped_degenerate;
            continue;
        }
        const Vec3& a = welded.vertices[f[0]];
        const Vec3 c = cross(welded.vertices[f[1]] - a, welded.vertices[f[2]] - a);
        const double len = norm(c);
        const double area = 0.5 * len;
        if (!(area >= hygiene.degenerate_area_epsilon) || len == 0.0) {
            ++diag.dropped_degenerate;
            continue;
        }
        for (VertexId& v : f) {
            if (compact[v] == std::numeric_limits<VertexId>::max()) {
                compact[v] = static_cast<VertexId>(vertices.size());
                vertices.push_back(welded.vertices[v]);
            }
            v = compact[v];
        }
        facets.push_back(f);
        normals.push_back(c * (1.0 / len));
        areas.push_back(area);
    }
    if (facets.empty()) {
        throw Error(ErrorKind::EmptyMesh, kModule,
                    "no non-degenerate facets (" + std::to_string(diag.dropped_degenerate) + " dropped)");
    }
}

} // namespace

TriangleMesh TriangleMesh::from_triangles(std::span<const Triangle> triangles, const MeshHygiene& hygiene)
{
    std::vector<Vec3> corners;
    corners.reserve(triangles.size() * 3);
    std::vector<std::array<VertexId, 3>> raw;
    raw.reserve(triangles.size());
    for (const Triangle& t : triangles) {
        const auto base = static_cast<VertexId>(corners.size());
        corners.insert(corners.end(), t.begin(), t.end());
        raw.push_back({base, base + 1, base + 2});
    }

    TriangleMesh mesh;
    assemble(corners, raw, hygiene, mesh.vertices_, mesh.facets_, mesh.normals_, mesh.areas_, mesh.diagnostics_);
    build_adjacency(mesh);
    return mesh;
}

TriangleMesh TriangleMesh::from_indexed(std::span<const Vec3> vertices,
                                        std::span<const std::array<VertexId, 3>> facets,
                                        const MeshHygiene& hygiene)
{
    for (const auto& f : facets) {
        for (VertexId v : f) {
            if (v >= vertices.size()) {
                throw Error(ErrorKind::InvalidMesh, kModule,
                            "vertex index " + std::to_string(v) + " out of range");
            }
        }
    }
    TriangleMesh mesh;
    assemble(vertices, facets, hygiene, mesh.vertices_, mesh.facets_, mesh.normals_, mesh.areas_, mesh.diagnostics_);
    build_adjacency(mesh);
    return mesh;
}

std::size_t TriangleMesh::neighbor_count(FacetId f) const
{
    const auto& slots = adjacency_[f];
    return static_cast<std::size_t>(std::count_if(slots.begin(), slots.end(), [](FacetId n) { return n != kNoFacet; }));
}

Edge TriangleMesh::edge(FacetId f, int slot) const
{
    const VertexId a = facets_[f][slot];
    const VertexId b = facets_[f][(slot + 1) % 3];
    return a < b ? Edge{a, b} : Edge{b, a};
}

Vec3 TriangleMesh::centroid(FacetId f) const
{
    const auto& t = facets_[f];
    return (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]) * (1.0 / 3.0);
}

double TriangleMesh::total_area() const
{
    double sum = 0.0;
    for (double a : areas_) {
        sum += a;
    }
    return sum;
}

void build_adjacency(TriangleMesh& mesh)
{
    struct Incidence {
        FacetId facet;
        int slot;
    };
    std::unordered_map<std::uint64_t, std::vector<Incidence>> edges;
    edges.reserve(mesh.facets_.size() * 2);

    for (FacetId f = 0; f < mesh.facets_.size(); ++f) {
        for (int s = 0; s < 3; ++s) {
            const Edge e = mesh.edge(f, s);
            edges[(static_cast<std::uint64_t>(e.a) << 32) | e.b].push_back({f, s});
        }
    }

    mesh.adjacency_.assign(mesh.facets_.size(), {kNoFacet, kNoFacet, kNoFacet});
    mesh.diagnostics_.non_manifold_edges = 0;
    mesh.diagnostics_.boundary_edges = 0;
    for (const auto& [key, incident] : edges) {
        if (incident.size() == 2) {
            mesh.adjacency_[incident[0].facet][incident[0].slot] = incident[1].facet;
            mesh.adjacency_[incident[1].facet][incident[1].slot] = incident[0].facet;
        } else if (incident.size() == 1) {
            ++mesh.diagnostics_.boundary_edges;
        } else {
            ++mesh.diagnostics_.non_manifold_edges;
        }
    }
}

} // namespace diemap
