#pragma once

#include "diemap/mesh.hpp"
#include "diemap/regions.hpp"
#include "diemap/speed_map.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace diemap {

enum class SequenceKind { Simple, Oriented, Indifferent };

std::string_view to_string(SequenceKind k);

/// Region-level sequence verdict. An Oriented verdict carries its
/// privileged direction, an XY-plane line angle in [0, pi).
struct SequenceType {
    SequenceKind kind = SequenceKind::Indifferent;
    std::optional<double> theta;

    static SequenceType simple() { return {SequenceKind::Simple, std::nullopt}; }
    static SequenceType oriented(double theta);
    static SequenceType indifferent() { return {SequenceKind::Indifferent, std::nullopt}; }

    bool operator==(const SequenceType&) const = default;
};

struct SweepConfig {
    double theta_start = 0.0;
    double theta_range = kPi / 2;
    double theta_step = kPi / 18;
    double chi_alignment_tolerance = kPi / 18;
    double oriented_fraction_threshold = 0.9;
    double projection_epsilon = 1e-6;
    std::optional<double> refinement_step;

    void validate() const;
    /// floor(range / step) + 1 directions starting at theta_start.
    std::vector<double> thetas() const;
};

/// Wraps an angle into [0, pi): directions are lines.
double wrap_line_angle(double theta);

struct ChiMap {
    double theta = 0.0;
    std::vector<double> chi;   // radians in [0, pi/2]; 0 where invalid
    std::vector<bool> valid;   // false for facets whose normal projects to ~0 in XY
};

struct DirectionScan {
    std::vector<double> thetas;
    std::vector<ChiMap> maps; // one per theta
};

ChiMap compute_chi(const TriangleMesh& mesh, double theta, const SweepConfig& cfg);
DirectionScan direction_scan(const TriangleMesh& mesh, const SweepConfig& cfg);

/// Grayscale on chi: white when aligned, black at pi/2, yellow where invalid.
std::vector<Rgb> chi_colors(const ChiMap& map);

/// Alignment scores of one region across candidate directions.
struct SweepResult {
    SequenceType verdict;
    double best_theta = 0.0;
    double best_score = 0.0;
    double valid_area_fraction = 0.0;
    std::vector<double> thetas;
    std::vector<double> scores;
};

/// Per-region direction sweep. score(theta) is the area of valid facets with
/// chi <= chi_alignment_tolerance over the valid area. The best direction
/// has the highest score, then the lowest area-weighted mean chi, then the
/// smallest theta. The region is Oriented when the best score reaches
/// oriented_fraction_threshold, Indifferent otherwise.
std::vector<SweepResult> oriented_sweep(const TriangleMesh& mesh, std::span<const Region> regions,
                                        const SweepConfig& cfg);

/// Connected regions of near-constant delta, grown on delta bins of width
/// `tolerance`. Every returned region is tagged Simple.
std::vector<Region> simple_sequence_map(const SpeedMap& speed, const TriangleMesh& mesh, double tolerance = 0.02);

/// True when every facet delta in the region lies within `tolerance` of the
/// region's area-weighted mean.
bool is_delta_constant(const Region& region, const SpeedMap& speed, const TriangleMesh& mesh, double tolerance);

struct SequenceOptions {
    SweepConfig sweep;
    double delta_constancy_tolerance = 0.02;
};

/// Verdict for every speed-map region. Horizontal regions are Simple without
/// a sweep. Other regions are Oriented when the sweep finds a privileged
/// direction, otherwise Simple when delta is constant, otherwise Indifferent.
std::vector<SequenceType> sequence_verdicts(const TriangleMesh& mesh, const SpeedMap& speed,
                                            const SequenceOptions& options,
                                            std::vector<SweepResult>* sweeps = nullptr);

} // namespace diemap
