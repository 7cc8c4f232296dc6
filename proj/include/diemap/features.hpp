#pragma once

#include "diemap/mesh.hpp"
#include "diemap/regions.hpp"
#include "diemap/sequence_map.hpp"
#include "diemap/speed_map.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

namespace diemap {

enum class FeatureKind : int { Flank = 0, SimpleFloor, OrientedFloor, IndifferentFloor, Transition };

inline constexpr std::array kAllFeatureKinds{
    FeatureKind::Flank, FeatureKind::SimpleFloor, FeatureKind::OrientedFloor,
    FeatureKind::IndifferentFloor, FeatureKind::Transition,
};

std::string_view to_string(FeatureKind k);
FeatureKind feature_kind_from_string(std::string_view name);
bool is_floor(FeatureKind k);

/// Kind of a speed-map region given its sequence verdict; nullopt for
/// Undercut, which never becomes a feature.
std::optional<FeatureKind> feature_kind_for(ContactClass c, const SequenceType& sequence);

struct MachiningFeature {
    std::size_t id = 0;
    FeatureKind kind = FeatureKind::Flank;
    Region region;
    double mean_delta = 0.0; // area-weighted
    double min_delta = 0.0;
    double max_delta = 0.0;
    std::optional<double> privileged_theta; // set iff kind == OrientedFloor
    /// Floor feature built at least partly from non-horizontal facets that
    /// absorbed or borders a Horizontal region.
    bool contains_horizontal_core = false;
    std::set<ContactClass> source_classes;
    std::vector<std::size_t> neighbor_feature_ids; // ascending

    bool horizontal_only() const
    {
        return source_classes.size() == 1 && *source_classes.begin() == ContactClass::Horizontal;
    }
};

/// Superposes the speed map and per-region sequence verdicts. Adjacent
/// regions of equal kind (and equal direction, for oriented floors) merge
/// into one feature. Throws MapMismatch when the inputs disagree in size.
std::vector<MachiningFeature> extract_features(const SpeedMap& speed, std::span<const SequenceType> sequences,
                                               const TriangleMesh& mesh);

struct KindSummary {
    std::size_t count = 0;
    std::size_t facets = 0;
    double area = 0.0;
};

struct FeatureReport {
    std::map<FeatureKind, KindSummary> by_kind;
    double total_area = 0.0;
    std::size_t total_facets = 0;
    std::vector<std::pair<std::size_t, std::size_t>> adjacency; // (a, b) with a < b
    std::vector<std::size_t> feature_ids;
};

FeatureReport feature_report(std::span<const MachiningFeature> features);

/// Deterministic, visually distinct color per feature id.
Rgb feature_color(std::size_t id);
std::vector<Rgb> feature_colors(std::span<const MachiningFeature> features, std::size_t facet_count);

} // namespace diemap
