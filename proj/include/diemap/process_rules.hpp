#pragma once

#include "diemap/features.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace diemap {

enum class ToolType { BallEndMill, CornerEndMill, EndMill };
enum class StrategyKind { ZLevel, Surfacing, ParallelPlanes };

std::string_view to_string(ToolType t);
std::string_view to_string(StrategyKind s);
ToolType tool_type_from_string(std::string_view name);
StrategyKind strategy_kind_from_string(std::string_view name);

/// The feature attributes the rules look at.
struct FeatureFacts {
    FeatureKind kind = FeatureKind::Flank;
    bool horizontal_only = false; // built only from Horizontal facets
    bool contains_horizontal_core = false;
    std::optional<double> privileged_theta;

    static FeatureFacts of(const MachiningFeature& feature);
};

struct RuleCondition {
    std::vector<FeatureKind> kinds; // empty matches every kind
    std::optional<bool> horizontal_only;
    std::optional<bool> contains_horizontal_core;

    bool matches(const FeatureFacts& facts) const;
};

struct ToolRule {
    std::string id;
    RuleCondition when;
    ToolType tool = ToolType::BallEndMill;
    std::optional<ToolType> alternate;
    bool corner_radius_note = false;
};

struct ExclusionRule {
    std::string id;
    RuleCondition when;
    ToolType tool = ToolType::BallEndMill;
    std::string reason;
};

struct StrategyRule {
    std::string id;
    RuleCondition when;
    StrategyKind strategy = StrategyKind::ZLevel;
};

struct ExcludedTool {
    ToolType tool = ToolType::BallEndMill;
    std::string reason;
    std::string rule;
};

struct ToolAssignment {
    ToolType tool = ToolType::BallEndMill;
    std::optional<ToolType> alternate;
    std::vector<ExcludedTool> excluded_tools;
    bool corner_radius_note = false; // corner end mill needs a small torus radius
    std::vector<std::string> rules;

    bool excludes(ToolType t) const;
};

struct StrategyAssignment {
    StrategyKind strategy = StrategyKind::ZLevel;
    std::optional<double> theta; // set iff strategy == ParallelPlanes
    std::vector<std::string> rationale;
};

/// Ordered decision tables: the first matching tool rule and strategy rule
/// win; every matching exclusion applies.
class RuleTable {
public:
    static const RuleTable& defaults();
    static RuleTable from_json(const nlohmann::json& doc);
    static RuleTable load(const std::filesystem::path& path);

    nlohmann::json to_json() const;

    /// Checks every (kind, horizontal_only, contains_horizontal_core)
    /// combination gets a tool that is not excluded and a strategy, and that
    /// ParallelPlanes is only chosen for oriented floors. Throws
    /// RuleTableInvalid.
    void validate() const;

    ToolAssignment assign_tool(const FeatureFacts& facts) const;
    StrategyAssignment assign_strategy(const FeatureFacts& facts) const;

    std::vector<ToolRule> tool_rules;
    std::vector<ExclusionRule> exclusions;
    std::vector<StrategyRule> strategy_rules;
};

ToolAssignment assign_tool(const MachiningFeature& feature, const RuleTable& rules = RuleTable::defaults());
StrategyAssignment assign_strategy(const MachiningFeature& feature, const RuleTable& rules = RuleTable::defaults());

struct PlanEntry {
    std::size_t feature_id = 0;
    FeatureKind kind = FeatureKind::Flank;
    ToolAssignment tool;
    StrategyAssignment strategy;
    std::vector<std::string> rule_trace;
};

struct ProcessPlan {
    std::vector<PlanEntry> entries; // ordered by feature id
};

ProcessPlan build_plan(std::span<const MachiningFeature> features, const RuleTable& rules = RuleTable::defaults());

} // namespace diemap
