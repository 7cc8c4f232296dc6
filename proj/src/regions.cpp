#include "diemap/regions.hpp"

#include "diemap/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

namespace diemap {

namespace {

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

Segmentation flood(const TriangleMesh& mesh, std::span<const Label> labels)
{
    const std::size_t n = mesh.facet_count();
    Segmentation seg;
    seg.facet_region.assign(n, kUnassigned);

    std::vector<FacetId> stack;
    for (FacetId seed = 0; seed < n; ++seed) {
        if (seg.facet_region[seed] != kUnassigned) {
            continue;
        }
        Region region;
        region.id = seg.regions.size();
        region.label = labels[seed];
        seg.facet_region[seed] = region.id;
        stack.push_back(seed);
        while (!stack.empty()) {
            const FacetId f = stack.back();
            stack.pop_back();
            region.facet_ids.push_back(f);
            for (FacetId nb : mesh.neighbor_slots(f)) {
                if (nb != kNoFacet && seg.facet_region[nb] == kUnassigned && labels[nb] == region.label) {
                    seg.facet_region[nb] = region.id;
                    stack.push_back(nb);
                }
            }
        }
        std::sort(region.facet_ids.begin(), region.facet_ids.end());
        for (FacetId f : region.facet_ids) {
            region.area += mesh.area(f);
        }
        seg.regions.push_back(std::move(region));
    }

    for (Region& r : seg.regions) {
        r.boundary_edges = boundary_edges(mesh, r.facet_ids, seg.facet_region, r.id);
    }
    return seg;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i)
{
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

} // namespace

std::vector<Edge> boundary_edges(const TriangleMesh& mesh, std::span<const FacetId> facets,
                                 std::span<const std::size_t> facet_owner, std::size_t owner)
{
    std::vector<Edge> edges;
    for (FacetId f : facets) {
        const auto& slots = mesh.neighbor_slots(f);
        for (int s = 0; s < 3; ++s) {
            if (slots[s] == kNoFacet || facet_owner[slots[s]] != owner) {
                edges.push_back(mesh.edge(f, s));
            }
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

Segmentation grow_regions(const TriangleMesh& mesh, std::span<const Label> labels, double min_region_area)
{
    if (labels.size() != mesh.facet_count()) {
        throw Error(ErrorKind::MapMismatch, "mesh_core",
                    "label count " + std::to_string(labels.size()) + " != facet count " +
                        std::to_string(mesh.facet_count()));
    }

    Segmentation seg = flood(mesh, labels);
    if (!(min_region_area > 0.0)) {
        return seg;
    }

    const std::size_t count = seg.regions.size();
    std::vector<std::size_t> parent(count);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<double> area(count);
    std::vector<std::size_t> facets(count);
    std::vector<Label> label(count);
    std::vector<std::set<std::size_t>> neighbors(count);
    for (const Region& r : seg.regions) {
        area[r.id] = r.area;
        facets[r.id] = r.facet_ids.size();
        label[r.id] = r.label;
        for (FacetId f : r.facet_ids) {
            for (FacetId nb : mesh.neighbor_slots(f)) {
                if (nb != kNoFacet && seg.facet_region[nb] != r.id) {
                    neighbors[r.id].insert(seg.facet_region[nb]);
                }
            }
        }
    }

    std::vector<std::size_t> order;
    for (const Region& r : seg.regions) {
        if (r.area < min_region_area) {
            order.push_back(r.id);
        }
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return area[a] < area[b]; });

    std::vector<RegionMerge> merges;
    for (std::size_t r : order) {
        const std::size_t root = find_root(parent, r);
        if (area[root] >= min_region_area) {
            continue;
        }
        // Largest neighbor wins; equal areas go to the lower region index.
        std::size_t target = kUnassigned;
        for (std::size_t nb : neighbors[root]) {
            const std::size_t nroot = find_root(parent, nb);
            if (nroot == root) {
                continue;
            }
            if (target == kUnassigned || area[nroot] > area[target] || (area[nroot] == area[target] && nroot < target)) {
                target = nroot;
            }
        }
        if (target == kUnassigned) {
            continue;
        }
        merges.push_back({label[root], seg.regions[root].facet_ids.front(), facets[root],
                          area[root], label[target], seg.regions[target].facet_ids.front()});
        parent[root] = target;
        area[target] += area[root];
        facets[target] += facets[root];
        neighbors[target].insert(neighbors[root].begin(), neighbors[root].end());
        neighbors[root].clear();
    }

    if (merges.empty()) {
        return seg;
    }

    std::vector<Label> relabeled(labels.size());
    for (FacetId f = 0; f < relabeled.size(); ++f) {
        relabeled[f] = label[find_root(parent, seg.facet_region[f])];
    }
    Segmentation merged = flood(mesh, relabeled);
    merged.merges = std::move(merges);
    return merged;
}

} // namespace diemap
