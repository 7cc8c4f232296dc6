#include "diemap/pipeline.hpp"

#include "diemap/error.hpp"
#include "diemap/ply.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace diemap {

namespace {

constexpr const char* kModule = "cli_report";

[[noreturn]] void bad_config(const std::string& msg) { throw Error(ErrorKind::InvalidConfig, kModule, msg); }

nlohmann::json optional_deg(const std::optional<double>& rad)
{
    return rad ? nlohmann::json(rad_to_deg(*rad)) : nlohmann::json(nullptr);
}

double number(const nlohmann::json& v, const std::string& key)
{
    if (!v.is_number()) {
        bad_config("'" + key + "' must be a number");
    }
    return v.get<double>();
}

} // namespace

void PipelineConfig::validate() const
{
    if (!(hygiene.weld_epsilon >= 0.0) || !(hygiene.degenerate_area_epsilon >= 0.0)) {
        bad_config("mesh hygiene epsilons must be non-negative");
    }
    speed.validate();
    sequence.sweep.validate();
    if (!(sequence.delta_constancy_tolerance > 0.0)) {
        bad_config("delta constancy tolerance must be positive");
    }
    if (!(min_region_area >= 0.0) || !std::isfinite(min_region_area)) {
        bad_config("min_region_area must be a finite non-negative area");
    }
    if (report_version != kReportSchemaVersion) {
        bad_config("unsupported report version " + std::to_string(report_version));
    }
}

nlohmann::json PipelineConfig::echo() const
{
    const SweepConfig& sweep = sequence.sweep;
    nlohmann::json j;
    j["draft_angle_deg"] = optional_deg(speed.draft_angle_phi);
    j["delta_draft"] = speed.delta_draft;
    j["eps_h"] = speed.eps_h;
    j["eps_d"] = speed.eps_d;
    j["band_qh"] = speed.qh;
    j["band_qv"] = speed.qv;
    j["undercut_tolerance"] = speed.undercut_tolerance;
    j["sweep_start_deg"] = rad_to_deg(sweep.theta_start);
    j["sweep_range_deg"] = rad_to_deg(sweep.theta_range);
    j["sweep_step_deg"] = rad_to_deg(sweep.theta_step);
    j["chi_tol_deg"] = rad_to_deg(sweep.chi_alignment_tolerance);
    j["oriented_threshold"] = sweep.oriented_fraction_threshold;
    j["projection_epsilon"] = sweep.projection_epsilon;
    j["refine_step_deg"] = optional_deg(sweep.refinement_step);
    j["delta_constancy"] = sequence.delta_constancy_tolerance;
    j["min_region_area"] = min_region_area;
    j["weld_epsilon"] = hygiene.weld_epsilon;
    j["degenerate_area_epsilon"] = hygiene.degenerate_area_epsilon;
    return j;
}

ExportToggles parse_export_list(const std::vector<std::string>& names)
{
    ExportToggles t;
    for (const std::string& n : names) {
        if (n == "speed") {
            t.speed = true;
        } else if (n == "chi") {
            t.chi = true;
        } else if (n == "features") {
            t.features = true;
        } else if (n == "all") {
            t = {true, true, true};
        } else if (n != "none") {
            bad_config("unknown export '" + n + "' (expected speed, chi, features, all or none)");
        }
    }
    return t;
}

void apply_config_json(PipelineConfig& cfg, const nlohmann::json& doc, const std::filesystem::path& base_dir)
{
    if (!doc.is_object()) {
        bad_config("config must be a JSON object");
    }
    if (doc.contains("draft_angle_deg") && doc.contains("delta_draft")) {
        bad_config("'draft_angle_deg' and 'delta_draft' are mutually exclusive");
    }
    SweepConfig& sweep = cfg.sequence.sweep;
    for (const auto& [key, v] : doc.items()) {
        if (key == "input") {
            cfg.input_path = v.get<std::string>();
        } else if (key == "output_dir") {
            cfg.output_dir = v.get<std::string>();
        } else if (key == "draft_angle_deg") {
            const double delta_draft = std::sin(deg_to_rad(number(v, key)));
            cfg.speed.draft_angle_phi = deg_to_rad(number(v, key));
            cfg.speed.delta_draft = delta_draft;
        } else if (key == "delta_draft") {
            cfg.speed.draft_angle_phi.reset();
            cfg.speed.delta_draft = number(v, key);
        } else if (key == "eps_h") {
            cfg.speed.eps_h = number(v, key);
        } else if (key == "eps_d") {
            cfg.speed.eps_d = number(v, key);
        } else if (key == "band_qh") {
            cfg.speed.qh = number(v, key);
        } else if (key == "band_qv") {
            cfg.speed.qv = number(v, key);
        } else if (key == "undercut_tolerance") {
            cfg.speed.undercut_tolerance = number(v, key);
        } else if (key == "sweep_start_deg") {
            sweep.theta_start = deg_to_rad(number(v, key));
        } else if (key == "sweep_range_deg") {
            sweep.theta_range = deg_to_rad(number(v, key));
        } else if (key == "sweep_step_deg") {
            sweep.theta_step = deg_to_rad(number(v, key));
        } else if (key == "chi_tol_deg") {
            sweep.chi_alignment_tolerance = deg_to_rad(number(v, key));
        } else if (key == "oriented_threshold") {
            sweep.oriented_fraction_threshold = number(v, key);
        } else if (key == "projection_epsilon") {
            sweep.projection_epsilon = number(v, key);
        } else if (key == "refine_step_deg") {
            if (v.is_null()) {
                sweep.refinement_step.reset();
            } else {
                sweep.refinement_step = deg_to_rad(number(v, key));
            }
        } else if (key == "delta_constancy") {
            cfg.sequence.delta_constancy_tolerance = number(v, key);
        } else if (key == "min_region_area") {
            cfg.min_region_area = number(v, key);
        } else if (key == "weld_epsilon") {
            cfg.hygiene.weld_epsilon = number(v, key);
        } else if (key == "degenerate_area_epsilon") {
            cfg.hygiene.degenerate_area_epsilon = number(v, key);
        } else if (key == "export") {
            std::vector<std::string> names;
            if (v.is_string()) {
                names.push_back(v.get<std::string>());
            } else if (v.is_array()) {
                for (const auto& n : v) {
                    if (!n.is_string()) {
                        bad_config("'export' entries must be strings");
                    }
                    names.push_back(n.get<std::string>());
                }
            } else {
                bad_config("'export' must be a string or a list of strings");
            }
            cfg.exports = parse_export_list(names);
        } else if (key == "rules") {
            std::filesystem::path p = v.get<std::string>();
            cfg.rules_path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
        } else if (key == "report_version") {
            if (!v.is_number_integer()) {
                bad_config("'report_version' must be an integer");
            }
            cfg.report_version = v.get<int>();
        } else {
            bad_config("unknown config key '" + key + "'");
        }
    }
}

void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        bad_config("cannot open config file '" + path.string() + "'");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        bad_config(path.string() + ": " + e.what());
    }
    try {
        apply_config_json(cfg, doc, path.parent_path());
    } catch (const nlohmann::json::exception& e) {
        bad_config(path.string() + ": " + e.what());
    }
}

Analysis analyze(TriangleMesh mesh, const PipelineConfig& cfg, const RuleTable& rules)
{
    Analysis a{std::move(mesh), {}, {}, {}, {}, {}, {}};
    a.speed = speed_map(a.mesh, cfg.speed, cfg.min_region_area);
    a.simple_sequences = simple_sequence_map(a.speed, a.mesh, cfg.sequence.delta_constancy_tolerance);
    a.sequences = sequence_verdicts(a.mesh, a.speed, cfg.sequence, &a.sweeps);
    a.features = extract_features(a.speed, a.sequences, a.mesh);
    a.plan = build_plan(a.features, rules);
    return a;
}

ReportDiagnostics ReportDiagnostics::of(const Analysis& analysis)
{
    ReportDiagnostics d;
    d.mesh = analysis.mesh.diagnostics();
    d.facet_count = analysis.mesh.facet_count();
    d.vertex_count = analysis.mesh.vertex_count();
    d.mesh_area = analysis.mesh.total_area();
    for (ContactClass c : kAllContactClasses) {
        d.class_counts[c] = 0;
        d.class_areas[c] = 0.0;
    }
    for (FacetId f = 0; f < analysis.speed.facet_count(); ++f) {
        ++d.class_counts[analysis.speed.classes[f]];
        d.class_areas[analysis.speed.classes[f]] += analysis.mesh.area(f);
    }
    d.speed_regions = analysis.speed.segmentation.regions.size();
    d.simple_sequence_regions = analysis.simple_sequences.size();
    d.merges = analysis.speed.segmentation.merges;
    return d;
}

nlohmann::json make_report(std::span<const MachiningFeature> features, const ProcessPlan& plan,
                           const ReportDiagnostics& diagnostics, const nlohmann::json& config_echo)
{
    using nlohmann::json;
    json report;
    report["schema"] = "diemap.report";
    report["schema_version"] = kReportSchemaVersion;
    report["config"] = config_echo;

    json diag;
    diag["source_facets"] = diagnostics.mesh.source_facets;
    diag["dropped_degenerate_facets"] = diagnostics.mesh.dropped_degenerate;
    diag["welded_vertices"] = diagnostics.mesh.welded_vertices;
    diag["non_manifold_edges"] = diagnostics.mesh.non_manifold_edges;
    diag["boundary_edges"] = diagnostics.mesh.boundary_edges;
    diag["facets"] = diagnostics.facet_count;
    diag["vertices"] = diagnostics.vertex_count;
    diag["mesh_area"] = diagnostics.mesh_area;
    diag["speed_map_regions"] = diagnostics.speed_regions;
    diag["simple_sequence_regions"] = diagnostics.simple_sequence_regions;
    diag["merged_regions"] = json::array();
    for (const RegionMerge& m : diagnostics.merges) {
        diag["merged_regions"].push_back({{"from_class", to_string(static_cast<ContactClass>(m.from_label))},
                                          {"from_seed_facet", m.from_seed},
                                          {"facets", m.facets},
                                          {"area", m.area},
                                          {"into_class", to_string(static_cast<ContactClass>(m.into_label))},
                                          {"into_seed_facet", m.into_seed}});
    }
    json classes = json::object();
    for (const auto& [c, count] : diagnostics.class_counts) {
        const auto area = diagnostics.class_areas.find(c);
        classes[std::string(to_string(c))] = {{"facets", count},
                                              {"area", area == diagnostics.class_areas.end() ? 0.0 : area->second}};
    }
    diag["contact_classes"] = classes;
    const auto undercut = diagnostics.class_counts.find(ContactClass::Undercut);
    const auto undercut_area = diagnostics.class_areas.find(ContactClass::Undercut);
    diag["undercut_facets"] = undercut == diagnostics.class_counts.end() ? 0 : undercut->second;
    diag["undercut_area"] = undercut_area == diagnostics.class_areas.end() ? 0.0 : undercut_area->second;
    report["diagnostics"] = diag;

    const FeatureReport summary = feature_report(features);
    json s;
    json by_kind = json::object();
    for (FeatureKind k : kAllFeatureKinds) {
        const auto it = summary.by_kind.find(k);
        const KindSummary ks = it == summary.by_kind.end() ? KindSummary{} : it->second;
        by_kind[std::string(to_string(k))] = {{"count", ks.count}, {"facets", ks.facets}, {"area", ks.area}};
    }
    s["feature_count"] = summary.feature_ids.size();
    s["by_kind"] = by_kind;
    s["total_area"] = summary.total_area;
    s["total_facets"] = summary.total_facets;
    s["adjacency"] = json::array();
    for (const auto& [a, b] : summary.adjacency) {
        s["adjacency"].push_back({a, b});
    }
    report["summary"] = s;

    std::map<std::size_t, const PlanEntry*> entries;
    for (const PlanEntry& e : plan.entries) {
        entries[e.feature_id] = &e;
    }
    std::vector<const MachiningFeature*> ordered;
    for (const MachiningFeature& f : features) {
        ordered.push_back(&f);
    }
    std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->id < b->id; });

    report["features"] = json::array();
    for (const MachiningFeature* f : ordered) {
        json jf;
        jf["id"] = f->id;
        jf["kind"] = to_string(f->kind);
        jf["facets"] = f->region.facet_ids.size();
        jf["boundary_edges"] = f->region.boundary_edges.size();
        jf["area"] = f->region.area;
        jf["mean_delta"] = f->mean_delta;
        jf["min_delta"] = f->min_delta;
        jf["max_delta"] = f->max_delta;
        jf["privileged_theta_deg"] = optional_deg(f->privileged_theta);
        jf["contains_horizontal_core"] = f->contains_horizontal_core;
        json sources = json::array();
        for (ContactClass c : f->source_classes) {
            sources.push_back(to_string(c));
        }
        jf["contact_classes"] = sources;
        jf["neighbors"] = f->neighbor_feature_ids;
        const auto it = entries.find(f->id);
        if (it != entries.end()) {
            const PlanEntry& e = *it->second;
            jf["tool"] = to_string(e.tool.tool);
            jf["alternate_tool"] = e.tool.alternate ? json(to_string(*e.tool.alternate)) : json(nullptr);
            jf["corner_radius_note"] = e.tool.corner_radius_note;
            jf["excluded_tools"] = json::array();
            for (const ExcludedTool& x : e.tool.excluded_tools) {
                jf["excluded_tools"].push_back({{"tool", to_string(x.tool)}, {"reason", x.reason}, {"rule", x.rule}});
            }
            jf["strategy"] = to_string(e.strategy.strategy);
            jf["strategy_theta_deg"] = optional_deg(e.strategy.theta);
            jf["rules"] = e.rule_trace;
        }
        report["features"].push_back(jf);
    }
    return report;
}

std::string render_report(const nlohmann::json& report) { return report.dump(2) + "\n"; }

void emit_report(const nlohmann::json& report, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::UnwritableOutput, kModule, "cannot write '" + path.string() + "'");
    }
    out << render_report(report);
    if (!out) {
        throw Error(ErrorKind::UnwritableOutput, kModule, "write failed on '" + path.string() + "'");
    }
}

nlohmann::json analysis_report(const Analysis& analysis, const PipelineConfig& cfg, const RuleTable& rules)
{
    nlohmann::json echo = cfg.echo();
    echo["rules"] = rules.to_json();
    return make_report(analysis.features, analysis.plan, ReportDiagnostics::of(analysis), echo);
}

std::string chi_export_name(double theta)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "chi_theta_%05.1f.ply", rad_to_deg(theta));
    return buf;
}

PipelineOutcome run_pipeline(const PipelineConfig& cfg)
{
    cfg.validate();
    const RuleTable rules = cfg.rules_path ? RuleTable::load(*cfg.rules_path) : RuleTable::defaults();

    TriangleMesh mesh = load_stl(cfg.input_path, cfg.hygiene);
    PipelineOutcome outcome{analyze(std::move(mesh), cfg, rules), {}, {}};
    const Analysis& a = outcome.analysis;

    outcome.report = analysis_report(a, cfg, rules);

    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec || !std::filesystem::is_directory(cfg.output_dir)) {
        throw Error(ErrorKind::UnwritableOutput, kModule,
                    "cannot create output directory '" + cfg.output_dir.string() + "'");
    }

    if (cfg.exports.speed) {
        const auto path = cfg.output_dir / "speed_map.ply";
        export_colored_mesh(a.mesh, speed_colors(a.speed, cfg.speed), path, "cutting speed map");
        outcome.written.push_back(path);
    }
    if (cfg.exports.chi) {
        const DirectionScan scan = direction_scan(a.mesh, cfg.sequence.sweep);
        for (const ChiMap& map : scan.maps) {
            const auto path = cfg.output_dir / chi_export_name(map.theta);
            export_colored_mesh(a.mesh, chi_colors(map), path, "oriented sequence map");
            outcome.written.push_back(path);
        }
    }
    if (cfg.exports.features) {
        const auto path = cfg.output_dir / "features.ply";
        export_colored_mesh(a.mesh, feature_colors(a.features, a.mesh.facet_count()), path, "machining features");
        outcome.written.push_back(path);
    }
    const auto report_path = cfg.output_dir / "report.json";
    emit_report(outcome.report, report_path);
    outcome.written.push_back(report_path);
    return outcome;
}

} // namespace diemap
