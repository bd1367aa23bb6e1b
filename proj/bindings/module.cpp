#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "rulelift/dataset.hpp"
#include "rulelift/error.hpp"
#include "rulelift/harness.hpp"
#include "rulelift/learner.hpp"
#include "rulelift/lift.hpp"
#include "rulelift/rule_model.hpp"
#include "rulelift/strings.hpp"

namespace py = pybind11;
using namespace rulelift;

namespace {

py::object to_py(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

LearnerConfig make_config(const std::string& heuristic, const std::string& averaging,
                          double beta, const std::string& mode, const std::string& lift,
                          double stop_fraction, bool label_conditions,
                          std::optional<std::size_t> max_rules, std::uint64_t seed) {
    LearnerConfig config;
    config.heuristic.measure = parse_measure(heuristic);
    config.heuristic.averaging = parse_averaging(averaging);
    config.heuristic.beta = beta;
    if (mode == "pos")
        config.mode.predict_absent = false;
    else if (mode == "posneg")
        config.mode.predict_absent = true;
    else
        throw ConfigError("unknown mode: " + mode);
    config.lift = parse_lift(lift);
    config.coverage_stop_fraction = stop_fraction;
    config.label_conditions = label_conditions;
    config.max_rules = max_rules;
    config.seed = seed;
    return config;
}

std::vector<LiftFunction> parse_grid(const std::vector<std::string>& specs) {
    std::vector<LiftFunction> grid;
    grid.reserve(specs.size());
    for (const std::string& spec : specs) grid.push_back(parse_lift(spec));
    return grid;
}

constexpr const char* kConfigArgs =
    "heuristic, averaging, beta, mode, lift, stop_fraction, label_conditions, "
    "max_rules, seed";

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multi-label rule list learner";

    py::register_exception<ParseError>(m, "ModelParseError", PyExc_ValueError);
    py::register_exception<SchemaError>(m, "SchemaMismatchError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "BadConfigError", PyExc_ValueError);
    py::register_exception<rulelift::ValueError>(m, "DataValueError", PyExc_ValueError);

    py::class_<Dataset>(m, "Dataset")
        .def_property_readonly("instance_count", &Dataset::instance_count)
        .def_property_readonly("attribute_count", &Dataset::attribute_count)
        .def_property_readonly("label_count", &Dataset::label_count)
        .def_property_readonly("label_names",
                               [](const Dataset& d) { return d.label_names; })
        .def_property_readonly("labels", [](const Dataset& d) { return d.labels; })
        .def("__repr__", [](const Dataset& d) {
            return "<Dataset " + std::to_string(d.instance_count()) + "x" +
                   std::to_string(d.attribute_count()) + " features, " +
                   std::to_string(d.label_count()) + " labels>";
        });

    py::class_<RuleModel>(m, "RuleModel")
        .def_property_readonly("rule_count",
                               [](const RuleModel& m_) { return m_.rules.size(); })
        .def_property_readonly("label_names",
                               [](const RuleModel& m_) { return m_.label_names; })
        .def_property_readonly("config",
                               [](const RuleModel& m_) { return m_.config_echo; })
        .def("rule_lines",
             [](const RuleModel& m_) {
                 std::vector<std::string> lines;
                 lines.reserve(m_.rules.size());
                 for (const Rule& r : m_.rules) lines.push_back(rule_to_text(m_, r));
                 return lines;
             })
        .def("__repr__", [](const RuleModel& m_) {
            return "<RuleModel with " + std::to_string(m_.rules.size()) + " rules>";
        });

    m.def("parse_csv", &parse_csv_dataset, py::arg("text"), py::arg("label_count"),
          "Parse CSV text whose trailing label_count columns are 0/1 labels");
    m.def("load_csv", &load_csv, py::arg("path"), py::arg("label_count"));
    m.def("load_mulan", &load_mulan, py::arg("arff_path"), py::arg("xml_path"),
          "Load an ARFF dataset with an XML label list");
    m.def("subset", &subset, py::arg("data"), py::arg("rows"),
          "New dataset holding the given rows in order");
    m.def("stratified_folds", &stratified_folds, py::arg("data"), py::arg("folds"),
          py::arg("seed"), "Label-balanced row partition, sorted within folds");

    m.def(
        "train",
        [](const Dataset& data, const std::string& heuristic, const std::string& averaging,
           double beta, const std::string& mode, const std::string& lift, double stop_fraction,
           bool label_conditions, std::optional<std::size_t> max_rules, std::uint64_t seed) {
            return learn(data, make_config(heuristic, averaging, beta, mode, lift,
                                           stop_fraction, label_conditions, max_rules, seed));
        },
        py::arg("data"), py::arg("heuristic") = "fm", py::arg("averaging") = "micro",
        py::arg("beta") = 0.5, py::arg("mode") = "pos", py::arg("lift") = "none",
        py::arg("stop_fraction") = 1.0, py::arg("label_conditions") = false,
        py::arg("max_rules") = std::nullopt, py::arg("seed") = 0,
        "Learn a rule list; configuration mirrors the command line flags");

    m.def(
        "predict",
        [](const RuleModel& model, const Dataset& data) {
            std::vector<LabelVector> out = predict_all(model, data);
            std::vector<std::vector<int>> rows(out.size());
            for (std::size_t i = 0; i < out.size(); ++i)
                rows[i].assign(out[i].begin(), out[i].end());
            return rows;
        },
        py::arg("model"), py::arg("data"), "0/1 prediction rows, one per instance");

    m.def(
        "evaluate",
        [](const RuleModel& model, const Dataset& data, double beta) {
            return to_py(report_to_json(evaluate(model, data, beta)));
        },
        py::arg("model"), py::arg("data"), py::arg("beta") = 1.0,
        "Standard test-time report as a dict");

    m.def(
        "model_stats",
        [](const RuleModel& model) { return to_py(stats_to_json(model_stats(model))); },
        py::arg("model"));

    m.def("serialize", &serialize, py::arg("model"), "Model file text");
    m.def("parse_model", &parse_model, py::arg("text"));
    m.def("load_model", &load_model, py::arg("path"));
    m.def("save_model", &save_model, py::arg("model"), py::arg("path"));

    m.def(
        "lift_at",
        [](const std::string& spec, std::size_t size, std::size_t label_count) {
            return lift_at(parse_lift(spec), size, label_count);
        },
        py::arg("spec"), py::arg("size"), py::arg("label_count"),
        "Lift value for a head of the given size");
    m.def(
        "max_remaining_lift",
        [](const std::string& spec, std::size_t size, std::size_t label_count) {
            return max_remaining_lift(parse_lift(spec), size, label_count);
        },
        py::arg("spec"), py::arg("size"), py::arg("label_count"),
        "Largest lift any strictly larger head can still reach");
    m.def(
        "canonical_lift",
        [](const std::string& spec) { return format_lift(parse_lift(spec)); },
        py::arg("spec"), "Canonical form of a lift spec string");

    m.def(
        "select_lift",
        [](const Dataset& data, const std::vector<std::string>& candidates, std::size_t folds,
           const std::string& heuristic, const std::string& averaging, double beta,
           const std::string& mode, const std::string& lift, double stop_fraction,
           bool label_conditions, std::optional<std::size_t> max_rules, std::uint64_t seed) {
            LiftSelection detail;
            LiftFunction picked =
                select_lift(data, parse_grid(candidates),
                            make_config(heuristic, averaging, beta, mode, lift, stop_fraction,
                                        label_conditions, max_rules, seed),
                            folds, &detail);
            py::dict out;
            out["selected"] = format_lift(picked);
            out["best_index"] = detail.best_index;
            out["mean_scores"] = detail.mean_scores;
            return out;
        },
        py::arg("data"), py::arg("candidates"), py::arg("folds") = 5,
        py::arg("heuristic") = "fm", py::arg("averaging") = "micro", py::arg("beta") = 0.5,
        py::arg("mode") = "pos", py::arg("lift") = "none", py::arg("stop_fraction") = 1.0,
        py::arg("label_conditions") = false, py::arg("max_rules") = std::nullopt,
        py::arg("seed") = 0,
        (std::string("Cross-validated lift choice; config args: ") + kConfigArgs).c_str());

    m.def(
        "sweep",
        [](const Dataset& data, const Dataset& test, const std::vector<std::string>& grid,
           const std::string& heuristic, const std::string& averaging, double beta,
           const std::string& mode, const std::string& lift, double stop_fraction,
           bool label_conditions, std::optional<std::size_t> max_rules, std::uint64_t seed) {
            auto points = sweep(data, test, parse_grid(grid),
                                make_config(heuristic, averaging, beta, mode, lift,
                                            stop_fraction, label_conditions, max_rules, seed));
            py::list out;
            for (const SweepPoint& point : points) out.append(to_py(sweep_point_to_json(point)));
            return out;
        },
        py::arg("data"), py::arg("test"), py::arg("grid"), py::arg("heuristic") = "fm",
        py::arg("averaging") = "micro", py::arg("beta") = 0.5, py::arg("mode") = "pos",
        py::arg("lift") = "none", py::arg("stop_fraction") = 1.0,
        py::arg("label_conditions") = false, py::arg("max_rules") = std::nullopt,
        py::arg("seed") = 0,
        (std::string("One trained and scored point per grid entry; config args: ") + kConfigArgs)
            .c_str());
}
