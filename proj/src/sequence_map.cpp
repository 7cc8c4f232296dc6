#include "diemap/sequence_map.hpp"

#include "diemap/error.hpp"

#include <algorithm>
#include <cmath>

namespace diemap {

namespace {

constexpr const char* kModule = "sequence_map";
constexpr double kTieEpsilon = 1e-12;

struct Projection {
    double px = 0.0, py = 0.0, length = 0.0;
    bool valid = false;
};

Projection project(const Vec3& n, double eps)
{
    Projection p{n.x, n.y, std::hypot(n.x, n.y), false};
    p.valid = p.length >= eps;
    return p;
}

double chi_of(const Projection& p, double theta)
{
    const double c = std::abs(p.px * std::cos(theta) + p.py * std::sin(theta)) / p.length;
    return std::acos(std::min(c, 1.0));
}

struct Score {
    double theta = 0.0;
    double score = 0.0;
    double mean_chi = 0.0;
};

// Higher score, then lower mean chi, then smaller theta.
bool better(const Score& a, const Score& b)
{
    if (std::abs(a.score - b.score) > kTieEpsilon) {
        return a.score > b.score;
    }
    if (std::abs(a.mean_chi - b.mean_chi) > kTieEpsilon) {
        return a.mean_chi < b.mean_chi;
    }
    return a.theta < b.theta;
}

struct RegionSample {
    std::vector<Projection> projections;
    std::vector<double> areas;
    double valid_area = 0.0;
    double total_area = 0.0;
};

Score score_at(const RegionSample& s, double theta, double tolerance)
{
    Score out{theta, 0.0, 0.0};
    double aligned = 0.0;
    double chi_sum = 0.0;
    for (std::size_t i = 0; i < s.projections.size(); ++i) {
        if (!s.projections[i].valid) {
            continue;
        }
        const double chi = chi_of(s.projections[i], theta);
        chi_sum += chi * s.areas[i];
        if (chi <= tolerance) {
            aligned += s.areas[i];
        }
    }
    out.score = aligned / s.valid_area;
    out.mean_chi = chi_sum / s.valid_area;
    return out;
}

} // namespace

std::string_view to_string(SequenceKind k)
{
    switch (k) {
    case SequenceKind::Simple: return "Simple";
    case SequenceKind::Oriented: return "Oriented";
    case SequenceKind::Indifferent: return "Indifferent";
    }
    return "Unknown";
}

SequenceType SequenceType::oriented(double theta) { return {SequenceKind::Oriented, wrap_line_angle(theta)}; }

double wrap_line_angle(double theta)
{
    double t = std::fmod(theta, kPi);
    if (t < 0.0) {
        t += kPi;
    }
    // fmod can land exactly on pi after the shift for tiny negatives.
    return t >= kPi ? 0.0 : t;
}

void SweepConfig::validate() const
{
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidConfig, kModule, msg); };
    if (!std::isfinite(theta_start)) {
        fail("sweep start must be finite");
    }
    if (!(theta_step > 0.0)) {
        fail("sweep step must be positive");
    }
    if (!(theta_range >= theta_step * (1.0 - 1e-12))) {
        fail("sweep range must be at least one step");
    }
    if (!(chi_alignment_tolerance >= 0.0 && chi_alignment_tolerance <= kPi / 2)) {
        fail("chi tolerance must lie in [0, 90] degrees");
    }
    if (!(oriented_fraction_threshold > 0.0 && oriented_fraction_threshold <= 1.0)) {
        fail("oriented threshold must lie in (0, 1]");
    }
    if (!(projection_epsilon > 0.0)) {
        fail("projection epsilon must be positive");
    }
    if (refinement_step && !(*refinement_step > 0.0 && *refinement_step <= theta_step)) {
        fail("refinement step must lie in (0, sweep step]");
    }
}

std::vector<double> SweepConfig::thetas() const
{
    const auto count = static_cast<std::size_t>(std::floor(theta_range / theta_step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = theta_start + static_cast<double>(i) * theta_step;
    }
    return out;
}

ChiMap compute_chi(const TriangleMesh& mesh, double theta, const SweepConfig& cfg)
{
    ChiMap map;
    map.theta = theta;
    map.chi.assign(mesh.facet_count(), 0.0);
    map.valid.assign(mesh.facet_count(), false);
    for (FacetId f = 0; f < mesh.facet_count(); ++f) {
        const Projection p = project(mesh.normal(f), cfg.projection_epsilon);
        if (p.valid) {
            map.valid[f] = true;
            map.chi[f] = chi_of(p, theta);
        }
    }
    return map;
}

DirectionScan direction_scan(const TriangleMesh& mesh, const SweepConfig& cfg)
{
    cfg.validate();
    DirectionScan scan;
    scan.thetas = cfg.thetas();
    for (double theta : scan.thetas) {
        scan.maps.push_back(compute_chi(mesh, theta, cfg));
    }
    return scan;
}

std::vector<Rgb> chi_colors(const ChiMap& map)
{
    std::vector<Rgb> colors(map.chi.size());
    for (std::size_t f = 0; f < colors.size(); ++f) {
        if (!map.valid[f]) {
            colors[f] = {255, 255, 0};
            continue;
        }
        const double t = 1.0 - std::clamp(map.chi[f] / (kPi / 2), 0.0, 1.0);
        const auto v = static_cast<std::uint8_t>(std::lround(255.0 * t));
        colors[f] = {v, v, v};
    }
    return colors;
}

std::vector<SweepResult> oriented_sweep(const TriangleMesh& mesh, std::span<const Region> regions,
                                        const SweepConfig& cfg)
{
    cfg.validate();
    const std::vector<double> thetas = cfg.thetas();

    std::vector<SweepResult> results;
    results.reserve(regions.size());
    for (const Region& region : regions) {
        RegionSample sample;
        for (FacetId f : region.facet_ids) {
            const Projection p = project(mesh.normal(f), cfg.projection_epsilon);
            sample.projections.push_back(p);
            sample.areas.push_back(mesh.area(f));
            sample.total_area += mesh.area(f);
            if (p.valid) {
                sample.valid_area += mesh.area(f);
            }
        }

        SweepResult result;
        result.thetas = thetas;
        result.scores.assign(thetas.size(), 0.0);
        result.valid_area_fraction = sample.total_area > 0.0 ? sample.valid_area / sample.total_area : 0.0;
        if (!(sample.valid_area > 0.0)) {
            result.verdict = SequenceType::indifferent();
            results.push_back(std::move(result));
            continue;
        }

        Score best;
        bool have_best = false;
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            const Score s = score_at(sample, thetas[i], cfg.chi_alignment_tolerance);
            result.scores[i] = s.score;
            if (!have_best || better(s, best)) {
                best = s;
                have_best = true;
            }
        }

        if (cfg.refinement_step) {
            const double step = *cfg.refinement_step;
            const auto count = static_cast<std::size_t>(std::floor(2.0 * cfg.theta_step / step + 1e-9));
            const double lo = best.theta - cfg.theta_step;
            Score refined = best;
            for (std::size_t k = 0; k <= count; ++k) {
                const Score s = score_at(sample, lo + static_cast<double>(k) * step, cfg.chi_alignment_tolerance);
                if (better(s, refined)) {
                    refined = s;
                }
            }
            best = refined;
        }

        result.best_theta = wrap_line_angle(best.theta);
        result.best_score = best.score;
        result.verdict = best.score >= cfg.oriented_fraction_threshold ? SequenceType::oriented(best.theta)
                                                                       : SequenceType::indifferent();
        results.push_back(std::move(result));
    }
    return results;
}

std::vector<Region> simple_sequence_map(const SpeedMap& speed, const TriangleMesh& mesh, double tolerance)
{
    if (!(tolerance > 0.0)) {
        throw Error(ErrorKind::InvalidConfig, kModule, "delta constancy tolerance must be positive");
    }
    if (speed.facet_count() != mesh.facet_count()) {
        throw Error(ErrorKind::MapMismatch, kModule, "speed map and mesh facet counts differ");
    }
    std::vector<Label> bins(mesh.facet_count());
    for (FacetId f = 0; f < bins.size(); ++f) {
        // The small bias keeps deltas that round just under a bin edge
        // (1 - 1e-16 on a flat face) in the bin they belong to.
        bins[f] = static_cast<Label>(std::floor((speed.criteria[f].delta + 1.0) / tolerance + 1e-9));
    }
    return grow_regions(mesh, bins).regions;
}

bool is_delta_constant(const Region& region, const SpeedMap& speed, const TriangleMesh& mesh, double tolerance)
{
    double weighted = 0.0;
    double area = 0.0;
    for (FacetId f : region.facet_ids) {
        weighted += speed.criteria[f].delta * mesh.area(f);
        area += mesh.area(f);
    }
    const double mean = weighted / area;
    return std::all_of(region.facet_ids.begin(), region.facet_ids.end(),
                       [&](FacetId f) { return std::abs(speed.criteria[f].delta - mean) <= tolerance; });
}

std::vector<SequenceType> sequence_verdicts(const TriangleMesh& mesh, const SpeedMap& speed,
                                            const SequenceOptions& options, std::vector<SweepResult>* sweeps)
{
    if (speed.facet_count() != mesh.facet_count()) {
        throw Error(ErrorKind::MapMismatch, kModule, "speed map and mesh facet counts differ");
    }
    if (!(options.delta_constancy_tolerance > 0.0)) {
        throw Error(ErrorKind::InvalidConfig, kModule, "delta constancy tolerance must be positive");
    }
    const auto& regions = speed.segmentation.regions;
    std::vector<SweepResult> results = oriented_sweep(mesh, regions, options.sweep);

    std::vector<SequenceType> verdicts(regions.size());
    for (std::size_t r = 0; r < regions.size(); ++r) {
        if (speed.region_class(r) == ContactClass::Horizontal) {
            verdicts[r] = SequenceType::simple();
        } else if (results[r].verdict.kind == SequenceKind::Oriented) {
            verdicts[r] = results[r].verdict;
        } else if (is_delta_constant(regions[r], speed, mesh, options.delta_constancy_tolerance)) {
            verdicts[r] = SequenceType::simple();
        } else {
            verdicts[r] = SequenceType::indifferent();
        }
    }
    if (sweeps) {
        *sweeps = std::move(results);
    }
    return verdicts;
}

} // namespace diemap
