#include "diemap/features.hpp"

#include "diemap/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace diemap {

namespace {

constexpr const char* kModule = "feature_extract";
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i)
{
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

} // namespace

std::string_view to_string(FeatureKind k)
{
    switch (k) {
    case FeatureKind::Flank: return "Flank";
    case FeatureKind::SimpleFloor: return "SimpleFloor";
    case FeatureKind::OrientedFloor: return "OrientedFloor";
    case FeatureKind::IndifferentFloor: return "IndifferentFloor";
    case FeatureKind::Transition: return "Transition";
    }
    return "Unknown";
}

FeatureKind feature_kind_from_string(std::string_view name)
{
    for (FeatureKind k : kAllFeatureKinds) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw Error(ErrorKind::UnknownKind, kModule, "unknown feature kind '" + std::string(name) + "'");
}

bool is_floor(FeatureKind k)
{
    return k == FeatureKind::SimpleFloor || k == FeatureKind::OrientedFloor || k == FeatureKind::IndifferentFloor;
}

std::optional<FeatureKind> feature_kind_for(ContactClass c, const SequenceType& sequence)
{
    switch (c) {
    case ContactClass::Draft:
    case ContactClass::QuasiVertical: return FeatureKind::Flank;
    case ContactClass::Horizontal: return FeatureKind::SimpleFloor;
    case ContactClass::Transition: return FeatureKind::Transition;
    case ContactClass::Undercut: return std::nullopt;
    case ContactClass::QuasiHorizontal:
        switch (sequence.kind) {
        case SequenceKind::Simple: return FeatureKind::SimpleFloor;
        case SequenceKind::Oriented: return FeatureKind::OrientedFloor;
        case SequenceKind::Indifferent: return FeatureKind::IndifferentFloor;
        }
    }
    return std::nullopt;
}

std::vector<MachiningFeature> extract_features(const SpeedMap& speed, std::span<const SequenceType> sequences,
                                               const TriangleMesh& mesh)
{
    const Segmentation& seg = speed.segmentation;
    if (speed.facet_count() != mesh.facet_count() || seg.facet_region.size() != mesh.facet_count() ||
        speed.criteria.size() != mesh.facet_count()) {
        throw Error(ErrorKind::MapMismatch, kModule,
                    "speed map covers " + std::to_string(speed.facet_count()) + " facets, mesh has " +
                        std::to_string(mesh.facet_count()));
    }
    if (sequences.size() != seg.regions.size()) {
        throw Error(ErrorKind::MapMismatch, kModule,
                    std::to_string(sequences.size()) + " sequence verdicts for " + std::to_string(seg.regions.size()) +
                        " speed-map regions");
    }

    const std::size_t region_count = seg.regions.size();
    std::vector<std::optional<FeatureKind>> kinds(region_count);
    std::vector<std::optional<double>> thetas(region_count);
    for (std::size_t r = 0; r < region_count; ++r) {
        kinds[r] = feature_kind_for(speed.region_class(r), sequences[r]);
        if (kinds[r] == FeatureKind::OrientedFloor) {
            if (!sequences[r].theta) {
                throw Error(ErrorKind::MissingTheta, kModule, "oriented verdict without a direction");
            }
            thetas[r] = sequences[r].theta;
        }
    }

    std::vector<std::size_t> parent(region_count);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<std::vector<std::size_t>> region_neighbors(region_count);
    for (FacetId f = 0; f < mesh.facet_count(); ++f) {
        const std::size_t a = seg.facet_region[f];
        for (FacetId nb : mesh.neighbor_slots(f)) {
            if (nb == kNoFacet) {
                continue;
            }
            const std::size_t b = seg.facet_region[nb];
            if (a == b) {
                continue;
            }
            region_neighbors[a].push_back(b);
            if (kinds[a] && kinds[a] == kinds[b] && thetas[a] == thetas[b]) {
                const std::size_t ra = find_root(parent, a);
                const std::size_t rb = find_root(parent, b);
                if (ra != rb) {
                    parent[std::max(ra, rb)] = std::min(ra, rb);
                }
            }
        }
    }

    // Roots are the lowest region index of each group, and regions are
    // ordered by smallest facet, so root order is feature id order.
    std::vector<std::size_t> feature_of_root(region_count, kNone);
    std::vector<MachiningFeature> features;
    for (std::size_t r = 0; r < region_count; ++r) {
        if (!kinds[r]) {
            continue;
        }
        const std::size_t root = find_root(parent, r);
        if (feature_of_root[root] == kNone) {
            feature_of_root[root] = features.size();
            MachiningFeature feat;
            feat.id = features.size();
            feat.kind = *kinds[r];
            feat.privileged_theta = thetas[r];
            features.push_back(std::move(feat));
        }
    }

    std::vector<std::size_t> facet_feature(mesh.facet_count(), kNone);
    std::vector<bool> borders_horizontal(features.size(), false);
    for (std::size_t r = 0; r < region_count; ++r) {
        if (!kinds[r]) {
            continue;
        }
        MachiningFeature& feat = features[feature_of_root[find_root(parent, r)]];
        feat.source_classes.insert(speed.region_class(r));
        const Region& region = seg.regions[r];
        feat.region.facet_ids.insert(feat.region.facet_ids.end(), region.facet_ids.begin(), region.facet_ids.end());
        for (FacetId f : region.facet_ids) {
            facet_feature[f] = feat.id;
        }
        for (std::size_t nb : region_neighbors[r]) {
            if (speed.region_class(nb) == ContactClass::Horizontal) {
                borders_horizontal[feat.id] = true;
            }
        }
    }

    for (MachiningFeature& feat : features) {
        Region& region = feat.region;
        region.id = feat.id;
        region.label = static_cast<Label>(feat.kind);
        std::sort(region.facet_ids.begin(), region.facet_ids.end());

        double weighted = 0.0;
        feat.min_delta = std::numeric_limits<double>::infinity();
        feat.max_delta = -std::numeric_limits<double>::infinity();
        for (FacetId f : region.facet_ids) {
            const double a = mesh.area(f);
            const double d = speed.criteria[f].delta;
            region.area += a;
            weighted += a * d;
            feat.min_delta = std::min(feat.min_delta, d);
            feat.max_delta = std::max(feat.max_delta, d);
        }
        feat.mean_delta = weighted / region.area;
        region.boundary_edges = boundary_edges(mesh, region.facet_ids, facet_feature, feat.id);

        const bool has_horizontal = feat.source_classes.contains(ContactClass::Horizontal);
        const bool has_other = feat.source_classes.size() > (has_horizontal ? 1u : 0u);
        feat.contains_horizontal_core =
            is_floor(feat.kind) && has_other && (has_horizontal || borders_horizontal[feat.id]);

        std::set<std::size_t> neighbors;
        for (FacetId f : region.facet_ids) {
            for (FacetId nb : mesh.neighbor_slots(f)) {
                if (nb != kNoFacet && facet_feature[nb] != kNone && facet_feature[nb] != feat.id) {
                    neighbors.insert(facet_feature[nb]);
                }
            }
        }
        feat.neighbor_feature_ids.assign(neighbors.begin(), neighbors.end());
    }
    return features;
}

FeatureReport feature_report(std::span<const MachiningFeature> features)
{
    FeatureReport report;
    std::vector<const MachiningFeature*> ordered;
    for (const MachiningFeature& f : features) {
        ordered.push_back(&f);
    }
    std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->id < b->id; });

    for (const MachiningFeature* f : ordered) {
        KindSummary& k = report.by_kind[f->kind];
        ++k.count;
        k.facets += f->region.facet_ids.size();
        k.area += f->region.area;
        report.total_area += f->region.area;
        report.total_facets += f->region.facet_ids.size();
        report.feature_ids.push_back(f->id);
        for (std::size_t nb : f->neighbor_feature_ids) {
            if (f->id < nb) {
                report.adjacency.emplace_back(f->id, nb);
            }
        }
    }
    std::sort(report.adjacency.begin(), report.adjacency.end());
    return report;
}

Rgb feature_color(std::size_t id)
{
    // Golden-ratio hue walk, fixed saturation and value.
    const double hue = std::fmod(0.13 + 0.618033988749895 * static_cast<double>(id), 1.0) * 6.0;
    const double s = 0.7;
    const double v = 0.95;
    const int sector = static_cast<int>(hue) % 6;
    const double frac = hue - std::floor(hue);
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * frac);
    const double t = v * (1.0 - s * (1.0 - frac));
    double r = v, g = t, b = p;
    switch (sector) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
    }
    auto byte = [](double x) { return static_cast<std::uint8_t>(std::lround(255.0 * x)); };
    return {byte(r), byte(g), byte(b)};
}

std::vector<Rgb> feature_colors(std::span<const MachiningFeature> features, std::size_t facet_count)
{
    std::vector<Rgb> colors(facet_count, Rgb{0, 0, 0});
    for (const MachiningFeature& f : features) {
        const Rgb c = feature_color(f.id);
        for (FacetId facet : f.region.facet_ids) {
            colors[facet] = c;
        }
    }
    return colors;
}

} // namespace diemap
