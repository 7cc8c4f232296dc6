#pragma once

#include "diemap/mesh.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace diemap {

using Label = std::int64_t;

/// A connected set of equal-label facets.
struct Region {
    std::size_t id = 0;
    Label label = 0;
    std::vector<FacetId> facet_ids; // ascending
    double area = 0.0;
    std::vector<Edge> boundary_edges; // ascending, unique
};

/// Small region absorbed into a neighbor during speckle suppression.
struct RegionMerge {
    Label from_label = 0;
    FacetId from_seed = 0; // smallest facet of the absorbed region
    std::size_t facets = 0;
    double area = 0.0;
    Label into_label = 0;
    FacetId into_seed = 0;
};

struct Segmentation {
    std::vector<Region> regions;            // ordered by smallest member facet
    std::vector<std::size_t> facet_region;  // facet -> index into regions
    std::vector<RegionMerge> merges;
};

/// Maximal connected components of equal-label facets. Regions smaller than
/// `min_region_area` are absorbed into their largest adjacent region; 0
/// disables merging.
Segmentation grow_regions(const TriangleMesh& mesh, std::span<const Label> labels, double min_region_area = 0.0);

/// Boundary of an arbitrary facet set: edges whose other side is outside the
/// set or on the mesh border.
std::vector<Edge> boundary_edges(const TriangleMesh& mesh, std::span<const FacetId> facets,
                                 std::span<const std::size_t> facet_owner, std::size_t owner);

} // namespace diemap
