// Thin string-based bridge: configs and reports cross as JSON text and the
// Python package turns them into dicts.

#include "diemap/error.hpp"
#include "diemap/pipeline.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace diemap;

namespace {

PipelineConfig config_from(const std::string& config_json)
{
    PipelineConfig cfg;
    if (!config_json.empty()) {
        try {
            apply_config_json(cfg, nlohmann::json::parse(config_json));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::InvalidConfig, "cli_report", e.what());
        }
    }
    cfg.validate();
    return cfg;
}

RuleTable rules_for(const PipelineConfig& cfg)
{
    return cfg.rules_path ? RuleTable::load(*cfg.rules_path) : RuleTable::defaults();
}

std::string analyze_mesh(TriangleMesh mesh, const PipelineConfig& cfg)
{
    const RuleTable rules = rules_for(cfg);
    const Analysis a = analyze(std::move(mesh), cfg, rules);
    return analysis_report(a, cfg, rules).dump();
}

std::vector<Triangle> to_triangles(const std::vector<std::array<double, 9>>& rows)
{
    std::vector<Triangle> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        out.push_back({Vec3{r[0], r[1], r[2]}, Vec3{r[3], r[4], r[5]}, Vec3{r[6], r[7], r[8]}});
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Forging-die mesh analysis: speed map, sequence maps, machining features and process plan";
    m.attr("__version__") = kVersion;

    auto base = py::register_exception<Error>(m, "DiemapError", PyExc_RuntimeError);
    (void)base;

    m.def(
        "analyze_file",
        [](const std::string& path, const std::string& config_json) {
            const PipelineConfig cfg = config_from(config_json);
            return analyze_mesh(load_stl(path, cfg.hygiene), cfg);
        },
        py::arg("path"), py::arg("config_json") = "", "Analyze an STL file and return the report as JSON text.");

    m.def(
        "analyze_triangles",
        [](const std::vector<std::array<double, 9>>& rows, const std::string& config_json) {
            const PipelineConfig cfg = config_from(config_json);
            const auto tris = to_triangles(rows);
            return analyze_mesh(TriangleMesh::from_triangles(tris, cfg.hygiene), cfg);
        },
        py::arg("triangles"), py::arg("config_json") = "",
        "Analyze triangles given as rows of nine coordinates; returns the report as JSON text.");

    m.def(
        "run",
        [](const std::string& config_json) {
            const PipelineOutcome out = run_pipeline(config_from(config_json));
            std::vector<std::string> written;
            for (const auto& p : out.written) {
                written.push_back(p.string());
            }
            return py::make_tuple(out.report.dump(), written);
        },
        py::arg("config_json"), "Full pipeline with file outputs; returns (report JSON, written paths).");

    m.def(
        "classify",
        [](double delta, const std::string& config_json) {
            return std::string(to_string(classify(delta, config_from(config_json).speed)));
        },
        py::arg("delta"), py::arg("config_json") = "", "Contact class of a facet with the given delta.");

    m.def(
        "feature_kind",
        [](const std::string& contact_class, const std::string& sequence, std::optional<double> theta) {
            SequenceType seq = SequenceType::indifferent();
            if (sequence == "Simple") {
                seq = SequenceType::simple();
            } else if (sequence == "Oriented") {
                seq = SequenceType::oriented(theta.value_or(0.0));
            } else if (sequence != "Indifferent") {
                throw Error(ErrorKind::UnknownKind, "sequence_map", "unknown sequence type '" + sequence + "'");
            }
            const auto kind = feature_kind_for(contact_class_from_string(contact_class), seq);
            return kind ? std::optional<std::string>(to_string(*kind)) : std::nullopt;
        },
        py::arg("contact_class"), py::arg("sequence"), py::arg("theta") = py::none(),
        "Feature kind for a contact class and sequence verdict; None for undercuts.");

    m.def(
        "assign",
        [](const std::string& kind, bool horizontal_only, bool contains_horizontal_core, std::optional<double> theta) {
            const FeatureFacts facts{feature_kind_from_string(kind), horizontal_only, contains_horizontal_core, theta};
            const RuleTable& rules = RuleTable::defaults();
            const ToolAssignment t = rules.assign_tool(facts);
            const StrategyAssignment s = rules.assign_strategy(facts);
            py::dict out;
            out["tool"] = std::string(to_string(t.tool));
            out["alternate_tool"] = t.alternate ? py::object(py::str(std::string(to_string(*t.alternate)))) : py::none();
            py::list excluded;
            for (const auto& x : t.excluded_tools) {
                excluded.append(py::make_tuple(std::string(to_string(x.tool)), x.reason));
            }
            out["excluded_tools"] = excluded;
            out["strategy"] = std::string(to_string(s.strategy));
            out["strategy_theta"] = s.theta ? py::object(py::float_(*s.theta)) : py::none();
            return out;
        },
        py::arg("kind"), py::arg("horizontal_only") = false, py::arg("contains_horizontal_core") = false,
        py::arg("theta") = py::none(), "Tool and strategy chosen by the built-in rule table.");
}
