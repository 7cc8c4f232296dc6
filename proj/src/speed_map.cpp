#include "diemap/speed_map.hpp"

#include "diemap/error.hpp"

#include <algorithm>
#include <cmath>

namespace diemap {

namespace {
constexpr const char* kModule = "speed_map";
}

std::string_view to_string(ContactClass c)
{
    switch (c) {
    case ContactClass::Horizontal: return "Horizontal";
    case ContactClass::QuasiHorizontal: return "QuasiHorizontal";
    case ContactClass::Draft: return "Draft";
    case ContactClass::QuasiVertical: return "QuasiVertical";
    case ContactClass::Transition: return "Transition";
    case ContactClass::Undercut: return "Undercut";
    }
    return "Unknown";
}

ContactClass contact_class_from_string(std::string_view name)
{
    for (ContactClass c : kAllContactClasses) {
        if (to_string(c) == name) {
            return c;
        }
    }
    throw Error(ErrorKind::UnknownKind, kModule, "unknown contact class '" + std::string(name) + "'");
}

ContactRegime contact_regime(ContactClass c)
{
    switch (c) {
    case ContactClass::Horizontal:
    case ContactClass::QuasiHorizontal: return ContactRegime::EndContact;
    case ContactClass::Draft:
    case ContactClass::QuasiVertical: return ContactRegime::FlankContact;
    case ContactClass::Transition: return ContactRegime::Mixed;
    case ContactClass::Undercut: return ContactRegime::Unreachable;
    }
    return ContactRegime::Unreachable;
}

SpeedMapConfig::SpeedMapConfig() : draft_angle_phi(deg_to_rad(5.0)), delta_draft(std::sin(deg_to_rad(5.0))) {}

SpeedMapConfig SpeedMapConfig::with_draft_angle(double phi_radians)
{
    SpeedMapConfig cfg;
    cfg.draft_angle_phi = phi_radians;
    cfg.delta_draft = std::sin(phi_radians);
    return cfg;
}

SpeedMapConfig SpeedMapConfig::with_delta_draft(double delta_draft)
{
    SpeedMapConfig cfg;
    cfg.draft_angle_phi.reset();
    cfg.delta_draft = delta_draft;
    return cfg;
}

void SpeedMapConfig::validate() const
{
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidConfig, kModule, msg); };
    if (draft_angle_phi && !(*draft_angle_phi > 0.0 && *draft_angle_phi < kPi / 2)) {
        fail("draft angle must lie in (0, 90) degrees");
    }
    if (!(delta_draft > 0.0 && delta_draft < 1.0)) {
        fail("delta_draft must lie in (0, 1)");
    }
    if (!(eps_h > 0.0 && eps_h < qh)) {
        fail("require 0 < eps_h < band_qh");
    }
    if (!(eps_d > 0.0 && eps_d < qv)) {
        fail("require 0 < eps_d < band_qv");
    }
    if (!(undercut_tolerance >= 0.0 && undercut_tolerance < delta_draft)) {
        fail("undercut_tolerance must lie in [0, delta_draft)");
    }
    if (delta_draft + eps_d >= 1.0 - qh) {
        throw Error(ErrorKind::ConfigOverlap, kModule,
                    "quasi-horizontal band [" + std::to_string(1.0 - qh) + ", 1] overlaps draft band [" +
                        std::to_string(delta_draft - eps_d) + ", " + std::to_string(delta_draft + eps_d) + "]");
    }
}

std::vector<SpeedCriterion> compute_delta(const TriangleMesh& mesh)
{
    std::vector<SpeedCriterion> out(mesh.facet_count());
    for (FacetId f = 0; f < out.size(); ++f) {
        const double delta = std::clamp(mesh.normal(f).z, -1.0, 1.0);
        out[f] = {delta, std::acos(delta)};
    }
    return out;
}

ContactClass classify(double delta, const SpeedMapConfig& cfg)
{
    if (delta < -cfg.undercut_tolerance) {
        return ContactClass::Undercut;
    }
    if (std::abs(delta - 1.0) <= cfg.eps_h) {
        return ContactClass::Horizontal;
    }
    if (std::abs(delta - 1.0) <= cfg.qh) {
        return ContactClass::QuasiHorizontal;
    }
    if (std::abs(delta - cfg.delta_draft) <= cfg.eps_d) {
        return ContactClass::Draft;
    }
    if (std::abs(delta - cfg.delta_draft) <= cfg.qv) {
        return ContactClass::QuasiVertical;
    }
    return ContactClass::Transition;
}

std::vector<ContactClass> classify_facets(std::span<const SpeedCriterion> criteria, const SpeedMapConfig& cfg)
{
    cfg.validate();
    std::vector<ContactClass> out(criteria.size());
    std::transform(criteria.begin(), criteria.end(), out.begin(),
                   [&cfg](const SpeedCriterion& c) { return classify(c.delta, cfg); });
    return out;
}

SpeedMap speed_map(const TriangleMesh& mesh, const SpeedMapConfig& cfg, double min_region_area)
{
    SpeedMap map;
    map.criteria = compute_delta(mesh);
    map.classes = classify_facets(map.criteria, cfg);
    std::vector<Label> labels(map.classes.size());
    std::transform(map.classes.begin(), map.classes.end(), labels.begin(),
                   [](ContactClass c) { return static_cast<Label>(c); });
    map.segmentation = grow_regions(mesh, labels, min_region_area);
    // Speckle merging may relabel facets; keep per-facet classes consistent
    // with the regions they ended up in.
    if (!map.segmentation.merges.empty()) {
        for (FacetId f = 0; f < map.classes.size(); ++f) {
            map.classes[f] = map.region_class(map.segmentation.facet_region[f]);
        }
    }
    return map;
}

Rgb speed_color(ContactClass c, double delta, const SpeedMapConfig& cfg)
{
    switch (c) {
    case ContactClass::Horizontal: return {139, 0, 0};
    case ContactClass::QuasiHorizontal: return {255, 0, 0};
    case ContactClass::Draft: return {0, 0, 139};
    case ContactClass::QuasiVertical: return {0, 0, 255};
    case ContactClass::Undercut: return {0, 0, 0};
    case ContactClass::Transition: break;
    }
    const double lo = cfg.delta_draft + cfg.qv;
    const double hi = 1.0 - cfg.qh;
    const double t = hi > lo ? std::clamp((delta - lo) / (hi - lo), 0.0, 1.0) : 0.5;
    return {static_cast<std::uint8_t>(std::lround(255.0 * t)), 0,
            static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - t)))};
}

std::vector<Rgb> speed_colors(const SpeedMap& map, const SpeedMapConfig& cfg)
{
    std::vector<Rgb> colors(map.facet_count());
    for (std::size_t f = 0; f < colors.size(); ++f) {
        colors[f] = speed_color(map.classes[f], map.criteria[f].delta, cfg);
    }
    return colors;
}

} // namespace diemap
