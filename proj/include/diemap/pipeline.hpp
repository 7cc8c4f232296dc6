#pragma once

#include "diemap/features.hpp"
#include "diemap/mesh.hpp"
#include "diemap/process_rules.hpp"
#include "diemap/sequence_map.hpp"
#include "diemap/speed_map.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace diemap {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kVersion = "0.1.0";

struct ExportToggles {
    bool speed = false;
    bool chi = false;
    bool features = false;
};

/// Every tunable of a run. Angles are radians here; the config file, the CLI
/// and the report use degrees.
struct PipelineConfig {
    std::filesystem::path input_path;
    std::filesystem::path output_dir = "diemap_out";
    MeshHygiene hygiene;
    SpeedMapConfig speed;
    SequenceOptions sequence;
    double min_region_area = 0.0;
    ExportToggles exports;
    std::optional<std::filesystem::path> rules_path;
    int report_version = kReportSchemaVersion;

    /// Throws InvalidConfig / ConfigOverlap. Touches no files.
    void validate() const;

    /// Analysis parameters as written to the report (no paths).
    nlohmann::json echo() const;
};

/// Applies a JSON config document on top of `cfg`. Relative rule-table paths
/// resolve against `base_dir`. Unknown keys are rejected.
void apply_config_json(PipelineConfig& cfg, const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path);

ExportToggles parse_export_list(const std::vector<std::string>& names);

/// Everything computed for one mesh.
struct Analysis {
    TriangleMesh mesh;
    SpeedMap speed;
    std::vector<Region> simple_sequences;
    std::vector<SweepResult> sweeps;
    std::vector<SequenceType> sequences;
    std::vector<MachiningFeature> features;
    ProcessPlan plan;
};

Analysis analyze(TriangleMesh mesh, const PipelineConfig& cfg, const RuleTable& rules = RuleTable::defaults());

struct ReportDiagnostics {
    MeshDiagnostics mesh;
    std::size_t facet_count = 0;
    std::size_t vertex_count = 0;
    double mesh_area = 0.0;
    std::map<ContactClass, std::size_t> class_counts;
    std::map<ContactClass, double> class_areas;
    std::size_t speed_regions = 0;
    std::size_t simple_sequence_regions = 0;
    std::vector<RegionMerge> merges;

    static ReportDiagnostics of(const Analysis& analysis);
};

nlohmann::json make_report(std::span<const MachiningFeature> features, const ProcessPlan& plan,
                           const ReportDiagnostics& diagnostics, const nlohmann::json& config_echo);
/// Report of an in-memory analysis, with `cfg` and `rules` echoed.
nlohmann::json analysis_report(const Analysis& analysis, const PipelineConfig& cfg,
                               const RuleTable& rules = RuleTable::defaults());

/// Two-space indented JSON with a trailing newline.
std::string render_report(const nlohmann::json& report);
void emit_report(const nlohmann::json& report, const std::filesystem::path& path);

struct PipelineOutcome {
    Analysis analysis;
    nlohmann::json report;
    std::vector<std::filesystem::path> written;
};

/// load -> speed map -> sequence maps -> features -> plan, then writes the
/// requested exports and report.json into output_dir.
PipelineOutcome run_pipeline(const PipelineConfig& cfg);

std::string chi_export_name(double theta);

} // namespace diemap
