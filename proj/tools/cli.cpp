#include "cli.hpp"

#include "diemap/error.hpp"
#include "diemap/pipeline.hpp"

#include <CLI11.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace diemap::cli {

namespace {

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::UnreadableFile:
    case ErrorKind::MalformedStl:
    case ErrorKind::EmptyMesh:
    case ErrorKind::InvalidMesh:
        return kInputError;
    case ErrorKind::ConfigOverlap:
    case ErrorKind::InvalidConfig:
    case ErrorKind::RuleTableInvalid:
    case ErrorKind::UnwritableOutput:
        return kConfigError;
    default:
        return kInternalError;
    }
}

struct Flags {
    std::string input;
    std::optional<std::string> out;
    std::optional<double> draft_angle;
    std::optional<double> delta_draft;
    std::optional<double> eps_h;
    std::optional<double> eps_d;
    std::optional<double> band_qh;
    std::optional<double> band_qv;
    std::optional<double> sweep_start;
    std::optional<double> sweep_range;
    std::optional<double> sweep_step;
    std::optional<double> chi_tol;
    std::optional<double> oriented_threshold;
    std::optional<double> refine_step;
    std::optional<double> delta_constancy;
    std::optional<double> min_region_area;
    std::vector<std::string> exports;
    std::optional<std::string> config;
    std::optional<std::string> rules;
    bool quiet = false;
};

void apply_flags(const Flags& f, PipelineConfig& cfg)
{
    cfg.input_path = f.input;
    if (f.out) {
        cfg.output_dir = *f.out;
    }
    if (f.draft_angle) {
        cfg.speed.draft_angle_phi = deg_to_rad(*f.draft_angle);
        cfg.speed.delta_draft = std::sin(deg_to_rad(*f.draft_angle));
    }
    if (f.delta_draft) {
        cfg.speed.draft_angle_phi.reset();
        cfg.speed.delta_draft = *f.delta_draft;
    }
    auto set = [](const std::optional<double>& v, double& target, bool degrees = false) {
        if (v) {
            target = degrees ? deg_to_rad(*v) : *v;
        }
    };
    set(f.eps_h, cfg.speed.eps_h);
    set(f.eps_d, cfg.speed.eps_d);
    set(f.band_qh, cfg.speed.qh);
    set(f.band_qv, cfg.speed.qv);
    SweepConfig& sweep = cfg.sequence.sweep;
    set(f.sweep_start, sweep.theta_start, true);
    set(f.sweep_range, sweep.theta_range, true);
    set(f.sweep_step, sweep.theta_step, true);
    set(f.chi_tol, sweep.chi_alignment_tolerance, true);
    set(f.oriented_threshold, sweep.oriented_fraction_threshold);
    if (f.refine_step) {
        sweep.refinement_step = deg_to_rad(*f.refine_step);
    }
    set(f.delta_constancy, cfg.sequence.delta_constancy_tolerance);
    set(f.min_region_area, cfg.min_region_area);
    if (!f.exports.empty()) {
        cfg.exports = parse_export_list(f.exports);
    }
    if (f.rules) {
        cfg.rules_path = *f.rules;
    }
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Decompose a forging-die STL into HSM machining features and a tool/strategy plan", "diemap"};
    app.set_version_flag("--version", std::string("diemap ") + kVersion);

    Flags f;
    app.add_option("input", f.input, "Input STL (binary or ASCII)")->required();
    app.add_option("--out", f.out, "Output directory (default: diemap_out)");
    auto* draft = app.add_option("--draft-angle", f.draft_angle, "Die draft angle in degrees, measured from vertical");
    auto* delta = app.add_option("--delta-draft", f.delta_draft, "Target delta of drafted walls, given directly");
    draft->excludes(delta);
    app.add_option("--eps-h", f.eps_h, "Horizontal tolerance on |delta - 1|");
    app.add_option("--eps-d", f.eps_d, "Draft tolerance on |delta - delta_draft|");
    app.add_option("--band-qh", f.band_qh, "Quasi-horizontal band on |delta - 1|");
    app.add_option("--band-qv", f.band_qv, "Quasi-vertical band on |delta - delta_draft|");
    app.add_option("--sweep-start", f.sweep_start, "First swept direction (degrees)");
    app.add_option("--sweep-range", f.sweep_range, "Swept range (degrees)");
    app.add_option("--sweep-step", f.sweep_step, "Sweep step (degrees)");
    app.add_option("--chi-tol", f.chi_tol, "Chi alignment tolerance (degrees)");
    app.add_option("--oriented-threshold", f.oriented_threshold, "Aligned area fraction for an oriented verdict");
    app.add_option("--refine-step", f.refine_step, "Second-pass step around the best direction (degrees)");
    app.add_option("--delta-constancy", f.delta_constancy, "Delta constancy tolerance for simple sequences");
    app.add_option("--min-region-area", f.min_region_area, "Absorb speed-map regions smaller than this (mm^2)");
    app.add_option("--export", f.exports, "Colored meshes to write: speed, chi, features, all")
        ->check(CLI::IsMember({"speed", "chi", "features", "all", "none"}))
        ->take_all();
    app.add_option("--config", f.config, "JSON config file; flags override its values");
    app.add_option("--rules", f.rules, "JSON rule table replacing the built-in tool/strategy rules");
    app.add_flag("-q,--quiet", f.quiet, "Do not print the summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        // --help / --version
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kConfigError;
    }

    PipelineConfig cfg;
    try {
        if (f.config) {
            apply_config_file(cfg, *f.config);
        }
        apply_flags(f, cfg);
        cfg.validate();
        const PipelineOutcome outcome = run_pipeline(cfg);
        if (!f.quiet) {
            const auto& summary = outcome.report.at("summary");
            out << "diemap: " << outcome.analysis.mesh.facet_count() << " facets, "
                << summary.at("feature_count").get<std::size_t>() << " features\n";
            for (const auto& feat : outcome.report.at("features")) {
                out << "  #" << feat.at("id").get<std::size_t>() << ' ' << feat.at("kind").get<std::string>()
                    << " area=" << feat.at("area").get<double>() << " tool=" << feat.at("tool").get<std::string>()
                    << " strategy=" << feat.at("strategy").get<std::string>() << '\n';
            }
            out << "report: " << (cfg.output_dir / "report.json").string() << '\n';
        }
        return kSuccess;
    } catch (const Error& e) {
        err << "diemap: error [" << e.module() << '/' << to_string(e.kind()) << "]: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "diemap: internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

} // namespace diemap::cli
