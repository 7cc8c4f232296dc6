#include "diemap/process_rules.hpp"

#include "diemap/error.hpp"

#include <algorithm>
#include <fstream>

namespace diemap {

namespace {

constexpr const char* kModule = "process_rules";

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::RuleTableInvalid, kModule, msg); }

void check_kind(FeatureKind k)
{
    const int v = static_cast<int>(k);
    if (v < 0 || v >= static_cast<int>(kAllFeatureKinds.size())) {
        throw Error(ErrorKind::UnknownKind, kModule, "feature kind value " + std::to_string(v));
    }
}

RuleCondition condition_from_json(const nlohmann::json& j)
{
    RuleCondition c;
    if (j.contains("kinds")) {
        for (const auto& k : j.at("kinds")) {
            c.kinds.push_back(feature_kind_from_string(k.get<std::string>()));
        }
    }
    if (j.contains("horizontal_only")) {
        c.horizontal_only = j.at("horizontal_only").get<bool>();
    }
    if (j.contains("contains_horizontal_core")) {
        c.contains_horizontal_core = j.at("contains_horizontal_core").get<bool>();
    }
    return c;
}

void condition_to_json(const RuleCondition& c, nlohmann::json& j)
{
    nlohmann::json kinds = nlohmann::json::array();
    for (FeatureKind k : c.kinds) {
        kinds.push_back(std::string(to_string(k)));
    }
    j["kinds"] = kinds;
    if (c.horizontal_only) {
        j["horizontal_only"] = *c.horizontal_only;
    }
    if (c.contains_horizontal_core) {
        j["contains_horizontal_core"] = *c.contains_horizontal_core;
    }
}

void check_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed, const std::string& where)
{
    if (!j.is_object()) {
        invalid(where + " must be an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            invalid("unknown key '" + key + "' in " + where);
        }
    }
}

RuleTable build_defaults()
{
    using K = FeatureKind;
    RuleTable t;
    t.tool_rules = {
        {"T-FLANK", {{K::Flank}, {}, {}}, ToolType::BallEndMill, {}, false},
        {"T-TRANSITION", {{K::Transition}, {}, {}}, ToolType::BallEndMill, {}, false},
        {"T-HORIZONTAL", {{K::SimpleFloor}, true, {}}, ToolType::EndMill, ToolType::CornerEndMill, true},
        {"T-QUASI-HORIZONTAL", {{K::SimpleFloor, K::OrientedFloor, K::IndifferentFloor}, {}, {}},
         ToolType::CornerEndMill, {}, true},
    };
    t.exclusions = {
        {"X-HORIZONTAL-CORE", {{K::SimpleFloor, K::OrientedFloor, K::IndifferentFloor}, {}, true},
         ToolType::BallEndMill, "too small effective cutting radius"},
    };
    t.strategy_rules = {
        {"S-FLANK", {{K::Flank}, {}, {}}, StrategyKind::ZLevel},
        {"S-TRANSITION", {{K::Transition}, {}, {}}, StrategyKind::ZLevel},
        {"S-SIMPLE-FLOOR", {{K::SimpleFloor}, {}, {}}, StrategyKind::Surfacing},
        {"S-INDIFFERENT-FLOOR", {{K::IndifferentFloor}, {}, {}}, StrategyKind::Surfacing},
        {"S-ORIENTED-FLOOR", {{K::OrientedFloor}, {}, {}}, StrategyKind::ParallelPlanes},
    };
    return t;
}

} // namespace

std::string_view to_string(ToolType t)
{
    switch (t) {
    case ToolType::BallEndMill: return "BallEndMill";
    case ToolType::CornerEndMill: return "CornerEndMill";
    case ToolType::EndMill: return "EndMill";
    }
    return "Unknown";
}

std::string_view to_string(StrategyKind s)
{
    switch (s) {
    case StrategyKind::ZLevel: return "ZLevel";
    case StrategyKind::Surfacing: return "Surfacing";
    case StrategyKind::ParallelPlanes: return "ParallelPlanes";
    }
    return "Unknown";
}

ToolType tool_type_from_string(std::string_view name)
{
    for (ToolType t : {ToolType::BallEndMill, ToolType::CornerEndMill, ToolType::EndMill}) {
        if (to_string(t) == name) {
            return t;
        }
    }
    invalid("unknown tool '" + std::string(name) + "'");
}

StrategyKind strategy_kind_from_string(std::string_view name)
{
    for (StrategyKind s : {StrategyKind::ZLevel, StrategyKind::Surfacing, StrategyKind::ParallelPlanes}) {
        if (to_string(s) == name) {
            return s;
        }
    }
    invalid("unknown strategy '" + std::string(name) + "'");
}

FeatureFacts FeatureFacts::of(const MachiningFeature& feature)
{
    return {feature.kind, feature.horizontal_only(), feature.contains_horizontal_core, feature.privileged_theta};
}

bool RuleCondition::matches(const FeatureFacts& facts) const
{
    if (!kinds.empty() && std::find(kinds.begin(), kinds.end(), facts.kind) == kinds.end()) {
        return false;
    }
    if (horizontal_only && *horizontal_only != facts.horizontal_only) {
        return false;
    }
    if (contains_horizontal_core && *contains_horizontal_core != facts.contains_horizontal_core) {
        return false;
    }
    return true;
}

bool ToolAssignment::excludes(ToolType t) const
{
    return std::any_of(excluded_tools.begin(), excluded_tools.end(), [t](const ExcludedTool& e) { return e.tool == t; });
}

const RuleTable& RuleTable::defaults()
{
    static const RuleTable table = build_defaults();
    return table;
}

RuleTable RuleTable::from_json(const nlohmann::json& doc)
{
    RuleTable t;
    try {
        check_keys(doc, {"version", "tool_rules", "exclusions", "strategy_rules"}, "rule table");
        if (doc.contains("version") && doc.at("version").get<int>() != 1) {
            invalid("unsupported rule table version");
        }
        for (const auto& j : doc.at("tool_rules")) {
            check_keys(j, {"id", "kinds", "horizontal_only", "contains_horizontal_core", "tool", "alternate",
                           "corner_radius_note"},
                       "tool rule");
            ToolRule r;
            r.id = j.at("id").get<std::string>();
            r.when = condition_from_json(j);
            r.tool = tool_type_from_string(j.at("tool").get<std::string>());
            if (j.contains("alternate")) {
                r.alternate = tool_type_from_string(j.at("alternate").get<std::string>());
            }
            r.corner_radius_note = j.value("corner_radius_note", false);
            t.tool_rules.push_back(std::move(r));
        }
        if (doc.contains("exclusions")) {
            for (const auto& j : doc.at("exclusions")) {
                check_keys(j, {"id", "kinds", "horizontal_only", "contains_horizontal_core", "tool", "reason"},
                           "exclusion");
                ExclusionRule r;
                r.id = j.at("id").get<std::string>();
                r.when = condition_from_json(j);
                r.tool = tool_type_from_string(j.at("tool").get<std::string>());
                r.reason = j.at("reason").get<std::string>();
                t.exclusions.push_back(std::move(r));
            }
        }
        for (const auto& j : doc.at("strategy_rules")) {
            check_keys(j, {"id", "kinds", "horizontal_only", "contains_horizontal_core", "strategy"}, "strategy rule");
            StrategyRule r;
            r.id = j.at("id").get<std::string>();
            r.when = condition_from_json(j);
            r.strategy = strategy_kind_from_string(j.at("strategy").get<std::string>());
            t.strategy_rules.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        invalid(e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::RuleTableInvalid) {
            throw;
        }
        invalid(e.what());
    }
    t.validate();
    return t;
}

RuleTable RuleTable::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::RuleTableInvalid, kModule, "cannot open rule table '" + path.string() + "'");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        invalid(path.string() + ": " + e.what());
    }
    return from_json(doc);
}

nlohmann::json RuleTable::to_json() const
{
    nlohmann::json doc;
    doc["version"] = 1;
    doc["tool_rules"] = nlohmann::json::array();
    for (const ToolRule& r : tool_rules) {
        nlohmann::json j;
        j["id"] = r.id;
        condition_to_json(r.when, j);
        j["tool"] = std::string(to_string(r.tool));
        if (r.alternate) {
            j["alternate"] = std::string(to_string(*r.alternate));
        }
        j["corner_radius_note"] = r.corner_radius_note;
        doc["tool_rules"].push_back(j);
    }
    doc["exclusions"] = nlohmann::json::array();
    for (const ExclusionRule& r : exclusions) {
        nlohmann::json j;
        j["id"] = r.id;
        condition_to_json(r.when, j);
        j["tool"] = std::string(to_string(r.tool));
        j["reason"] = r.reason;
        doc["exclusions"].push_back(j);
    }
    doc["strategy_rules"] = nlohmann::json::array();
    for (const StrategyRule& r : strategy_rules) {
        nlohmann::json j;
        j["id"] = r.id;
        condition_to_json(r.when, j);
        j["strategy"] = std::string(to_string(r.strategy));
        doc["strategy_rules"].push_back(j);
    }
    return doc;
}

void RuleTable::validate() const
{
    for (FeatureKind kind : kAllFeatureKinds) {
        for (bool horizontal_only : {false, true}) {
            for (bool core : {false, true}) {
                const FeatureFacts facts{kind, horizontal_only, core, 0.0};
                const std::string where = std::string(to_string(kind)) + " (horizontal_only=" +
                                          (horizontal_only ? "true" : "false") + ", contains_horizontal_core=" +
                                          (core ? "true" : "false") + ")";
                const auto tool = std::find_if(tool_rules.begin(), tool_rules.end(),
                                               [&](const ToolRule& r) { return r.when.matches(facts); });
                if (tool == tool_rules.end()) {
                    invalid("no tool rule covers " + where);
                }
                for (const ExclusionRule& x : exclusions) {
                    if (x.when.matches(facts) && x.tool == tool->tool) {
                        invalid("rule " + tool->id + " assigns a tool excluded by " + x.id + " for " + where);
                    }
                }
                const auto strategy = std::find_if(strategy_rules.begin(), strategy_rules.end(),
                                                   [&](const StrategyRule& r) { return r.when.matches(facts); });
                if (strategy == strategy_rules.end()) {
                    invalid("no strategy rule covers " + where);
                }
                if (strategy->strategy == StrategyKind::ParallelPlanes && kind != FeatureKind::OrientedFloor) {
                    invalid("rule " + strategy->id + " assigns ParallelPlanes to " + where +
                            ", which has no privileged direction");
                }
            }
        }
    }
}

ToolAssignment RuleTable::assign_tool(const FeatureFacts& facts) const
{
    check_kind(facts.kind);
    const auto rule =
        std::find_if(tool_rules.begin(), tool_rules.end(), [&](const ToolRule& r) { return r.when.matches(facts); });
    if (rule == tool_rules.end()) {
        throw Error(ErrorKind::UnknownKind, kModule, "no tool rule for " + std::string(to_string(facts.kind)));
    }

    ToolAssignment out;
    out.tool = rule->tool;
    out.alternate = rule->alternate;
    out.corner_radius_note = rule->corner_radius_note;
    out.rules.push_back(rule->id);
    for (const ExclusionRule& x : exclusions) {
        if (x.when.matches(facts) && !out.excludes(x.tool)) {
            out.excluded_tools.push_back({x.tool, x.reason, x.id});
            out.rules.push_back(x.id);
        }
    }
    if (out.excludes(out.tool)) {
        throw Error(ErrorKind::RuleTableInvalid, kModule,
                    "rule " + rule->id + " assigns an excluded tool to " + std::string(to_string(facts.kind)));
    }
    if (out.alternate && out.excludes(*out.alternate)) {
        out.alternate.reset();
    }
    return out;
}

StrategyAssignment RuleTable::assign_strategy(const FeatureFacts& facts) const
{
    check_kind(facts.kind);
    const auto rule = std::find_if(strategy_rules.begin(), strategy_rules.end(),
                                   [&](const StrategyRule& r) { return r.when.matches(facts); });
    if (rule == strategy_rules.end()) {
        throw Error(ErrorKind::UnknownKind, kModule, "no strategy rule for " + std::string(to_string(facts.kind)));
    }
    StrategyAssignment out;
    out.strategy = rule->strategy;
    out.rationale.push_back(rule->id);
    if (out.strategy == StrategyKind::ParallelPlanes) {
        if (!facts.privileged_theta) {
            throw Error(ErrorKind::MissingTheta, kModule,
                        std::string(to_string(facts.kind)) + " has no privileged direction for ParallelPlanes");
        }
        out.theta = facts.privileged_theta;
    }
    return out;
}

ToolAssignment assign_tool(const MachiningFeature& feature, const RuleTable& rules)
{
    return rules.assign_tool(FeatureFacts::of(feature));
}

StrategyAssignment assign_strategy(const MachiningFeature& feature, const RuleTable& rules)
{
    return rules.assign_strategy(FeatureFacts::of(feature));
}

ProcessPlan build_plan(std::span<const MachiningFeature> features, const RuleTable& rules)
{
    ProcessPlan plan;
    for (const MachiningFeature& f : features) {
        PlanEntry e;
        e.feature_id = f.id;
        e.kind = f.kind;
        e.tool = assign_tool(f, rules);
        e.strategy = assign_strategy(f, rules);
        e.rule_trace = e.tool.rules;
        e.rule_trace.insert(e.rule_trace.end(), e.strategy.rationale.begin(), e.strategy.rationale.end());
        plan.entries.push_back(std::move(e));
    }
    std::sort(plan.entries.begin(), plan.entries.end(),
              [](const PlanEntry& a, const PlanEntry& b) { return a.feature_id < b.feature_id; });
    return plan;
}

} // namespace diemap
