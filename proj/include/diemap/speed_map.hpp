#pragma once

#include "diemap/mesh.hpp"
#include "diemap/regions.hpp"

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace diemap {

/// Cutting-speed criterion of one facet: delta = cos(beta), beta being the
/// angle between the +Z tool axis and the outward facet normal.
struct SpeedCriterion {
    double delta = 0.0;
    double beta = 0.0; // radians, [0, pi]
};

enum class ContactClass : int {
    Horizontal = 0,
    QuasiHorizontal,
    Draft,
    QuasiVertical,
    Transition,
    Undercut,
};

inline constexpr std::array kAllContactClasses{
    ContactClass::Horizontal, ContactClass::QuasiHorizontal, ContactClass::Draft,
    ContactClass::QuasiVertical, ContactClass::Transition, ContactClass::Undercut,
};

std::string_view to_string(ContactClass c);
ContactClass contact_class_from_string(std::string_view name);

/// Horizontal and quasi-horizontal facets engage the tool tip; drafted and
/// quasi-vertical facets engage the flank.
enum class ContactRegime { EndContact, FlankContact, Mixed, Unreachable };
ContactRegime contact_regime(ContactClass c);

struct SpeedMapConfig {
    /// Draft angle measured from vertical. When set, delta_draft = sin(phi).
    std::optional<double> draft_angle_phi;
    double delta_draft = 0.0;
    double eps_h = 0.015;
    double eps_d = 0.015;
    double qh = 0.15;
    double qv = 0.15;
    /// Facets with delta below -undercut_tolerance are Undercut. Keeps
    /// vertical walls whose normal z is round-off noise out of the class.
    double undercut_tolerance = 1e-9;

    SpeedMapConfig();

    static SpeedMapConfig with_draft_angle(double phi_radians);
    static SpeedMapConfig with_delta_draft(double delta_draft);

    /// Throws InvalidConfig for out-of-range values and ConfigOverlap when
    /// the quasi-horizontal band reaches into the draft band.
    void validate() const;
};

std::vector<SpeedCriterion> compute_delta(const TriangleMesh& mesh);

/// First matching rule wins: Undercut, Horizontal, QuasiHorizontal, Draft,
/// QuasiVertical, Transition.
ContactClass classify(double delta, const SpeedMapConfig& cfg);

std::vector<ContactClass> classify_facets(std::span<const SpeedCriterion> criteria, const SpeedMapConfig& cfg);

struct SpeedMap {
    std::vector<SpeedCriterion> criteria;
    std::vector<ContactClass> classes;
    Segmentation segmentation; // region labels are ContactClass values

    ContactClass region_class(std::size_t region) const
    {
        return static_cast<ContactClass>(segmentation.regions[region].label);
    }
    std::size_t facet_count() const { return classes.size(); }
};

SpeedMap speed_map(const TriangleMesh& mesh, const SpeedMapConfig& cfg, double min_region_area = 0.0);

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

/// Class palette; Transition facets blend red to blue by where delta sits
/// between the quasi-vertical and quasi-horizontal bands.
Rgb speed_color(ContactClass c, double delta, const SpeedMapConfig& cfg);
std::vector<Rgb> speed_colors(const SpeedMap& map, const SpeedMapConfig& cfg);

} // namespace diemap
