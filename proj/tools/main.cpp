#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rulelift/dataset.hpp"
#include "rulelift/error.hpp"
#include "rulelift/harness.hpp"
#include "rulelift/learner.hpp"
#include "rulelift/lift.hpp"
#include "rulelift/rule_model.hpp"
#include "rulelift/strings.hpp"

namespace {

using namespace rulelift;

struct DataFlags {
    std::string data;
    std::string labels_xml;
    std::optional<std::size_t> label_count;
};

void add_data_flags(CLI::App* cmd, DataFlags& flags) {
    cmd->add_option("--data", flags.data, "Dataset file (CSV, or ARFF with --labels-xml)")
        ->required();
    auto* xml = cmd->add_option("--labels-xml", flags.labels_xml,
                                "Label list XML marking the label columns of an ARFF file");
    auto* count = cmd->add_option("--label-count", flags.label_count,
                                  "Number of trailing CSV columns holding labels");
    xml->excludes(count);
    count->excludes(xml);
}

Dataset load_data(const DataFlags& flags) {
    if (!flags.labels_xml.empty()) return load_mulan(flags.data, flags.labels_xml);
    if (flags.label_count) return load_csv(flags.data, *flags.label_count);
    throw ConfigError("either --labels-xml or --label-count is required");
}

struct LearnFlags {
    std::string heuristic = "fm";
    std::string averaging = "micro";
    double beta = 0.5;
    std::string mode = "pos";
    std::string lift = "none";
    double stop_fraction = 1.0;
    bool label_conditions = false;
    std::optional<std::size_t> max_rules;
    std::uint64_t seed = 0;
};

void add_learn_flags(CLI::App* cmd, LearnFlags& flags) {
    cmd->add_option("--heuristic", flags.heuristic, "Training measure")
        ->check(CLI::IsMember({"precision", "ha", "fm"}))
        ->capture_default_str();
    cmd->add_option("--averaging", flags.averaging, "Measure averaging")
        ->check(CLI::IsMember({"micro", "macro"}))
        ->capture_default_str();
    cmd->add_option("--beta", flags.beta, "F-measure beta for training")
        ->capture_default_str();
    cmd->add_option("--mode", flags.mode, "Head values: positive only, or both")
        ->check(CLI::IsMember({"pos", "posneg"}))
        ->capture_default_str();
    cmd->add_option("--lift", flags.lift,
                    "Lift spec: none | kln:k=K | peak:m=M,lmax=L,c=C | table:v1,v2,...")
        ->capture_default_str();
    cmd->add_option("--stop-fraction", flags.stop_fraction,
                    "Stop once this fraction of (instance, label) pairs is covered")
        ->capture_default_str();
    cmd->add_flag("--label-conditions", flags.label_conditions,
                  "Allow rule bodies to test labels decided by earlier rules");
    cmd->add_option("--max-rules", flags.max_rules, "Cap on the number of rules");
    cmd->add_option("--seed", flags.seed, "Seed for fold assignment")->capture_default_str();
}

LearnerConfig to_config(const LearnFlags& flags) {
    LearnerConfig config;
    config.heuristic.measure = parse_measure(flags.heuristic);
    config.heuristic.averaging = parse_averaging(flags.averaging);
    config.heuristic.beta = flags.beta;
    config.mode.predict_absent = flags.mode == "posneg";
    config.lift = parse_lift(flags.lift);
    config.coverage_stop_fraction = flags.stop_fraction;
    config.label_conditions = flags.label_conditions;
    config.max_rules = flags.max_rules;
    config.seed = flags.seed;
    return config;
}

std::vector<LiftFunction> default_grid() {
    std::vector<LiftFunction> grid;
    grid.push_back(LiftFunction::identity());
    for (double k : {0.05, 0.1, 0.2, 0.3, 0.4}) grid.push_back(LiftFunction::kln(k));
    for (std::size_t m : {2, 3, 5})
        for (double l : {1.05, 1.1, 1.2})
            for (double c : {1.0, 2.0}) grid.push_back(LiftFunction::peak(m, l, c));
    return grid;
}

std::vector<LiftFunction> read_grid(const std::string& path) {
    if (path.empty()) return default_grid();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open grid file: " + path);
    std::vector<LiftFunction> grid;
    std::string line;
    while (std::getline(in, line)) {
        std::string spec{trim(line)};
        if (spec.empty() || spec[0] == '#') continue;
        grid.push_back(parse_lift(spec));
    }
    if (grid.empty()) throw ConfigError("grid file has no lift specs: " + path);
    return grid;
}

void write_predictions(const RuleModel& model, const Dataset& data, const std::string& path) {
    std::vector<LabelVector> predictions = predict_all(model, data);
    std::string out;
    for (std::size_t i = 0; i < model.label_names.size(); ++i) {
        if (i) out += ',';
        out += model.label_names[i];
    }
    out += '\n';
    for (const LabelVector& row : predictions) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i] ? '1' : '0';
        }
        out += '\n';
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot write predictions: " + path);
    file << out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-label rule list learner"};
    app.require_subcommand(1);

    DataFlags data_flags;
    LearnFlags learn_flags;
    std::string model_path;
    std::string out_path;
    std::string grid_path;
    std::string test_data;
    std::size_t folds = 5;
    double eval_beta = 1.0;

    CLI::App* train = app.add_subcommand("train", "Learn a rule list");
    add_data_flags(train, data_flags);
    add_learn_flags(train, learn_flags);
    train->add_option("--out", model_path, "Model file to write")->required();

    CLI::App* predict_cmd = app.add_subcommand("predict", "Predict labels with a model");
    predict_cmd->add_option("--model", model_path, "Model file")->required();
    add_data_flags(predict_cmd, data_flags);
    predict_cmd->add_option("--out", out_path, "Prediction CSV to write")->required();

    CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "Score a model on a dataset");
    evaluate_cmd->add_option("--model", model_path, "Model file")->required();
    add_data_flags(evaluate_cmd, data_flags);
    evaluate_cmd->add_option("--beta", eval_beta, "Evaluation F-measure beta")
        ->capture_default_str();

    CLI::App* select = app.add_subcommand("cv-select", "Pick a lift by cross-validation");
    add_data_flags(select, data_flags);
    add_learn_flags(select, learn_flags);
    select->add_option("--grid", grid_path, "Lift grid file: one spec per line, # comments");
    select->add_option("--folds", folds, "Cross-validation folds")->capture_default_str();

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Train and score every grid point");
    add_data_flags(sweep_cmd, data_flags);
    add_learn_flags(sweep_cmd, learn_flags);
    sweep_cmd->add_option("--test", test_data, "Held-out dataset in the same format")
        ->required();
    sweep_cmd->add_option("--grid", grid_path, "Lift grid file: one spec per line, # comments");
    sweep_cmd->add_option("--out", out_path, "JSONL output file (default stdout)");

    CLI::App* stats_cmd = app.add_subcommand("stats", "Describe a model file");
    stats_cmd->add_option("--model", model_path, "Model file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) {
            Dataset data = load_data(data_flags);
            RuleModel model = learn(data, to_config(learn_flags));
            save_model(model, model_path);
        } else if (*predict_cmd) {
            RuleModel model = load_model(model_path);
            write_predictions(model, load_data(data_flags), out_path);
        } else if (*evaluate_cmd) {
            RuleModel model = load_model(model_path);
            EvaluationReport report = evaluate(model, load_data(data_flags), eval_beta);
            std::cout << report_to_json(report).dump(2) << "\n";
        } else if (*select) {
            Dataset data = load_data(data_flags);
            std::vector<LiftFunction> grid = read_grid(grid_path);
            LiftSelection detail;
            LiftFunction picked = select_lift(data, grid, to_config(learn_flags), folds, &detail);
            nlohmann::json out;
            out["selected"] = format_lift(picked);
            out["best_index"] = detail.best_index;
            nlohmann::json entries = nlohmann::json::array();
            for (std::size_t i = 0; i < grid.size(); ++i)
                entries.push_back({{"lift", format_lift(grid[i])},
                                   {"mean_score", detail.mean_scores[i]}});
            out["grid"] = std::move(entries);
            std::cout << out.dump(2) << "\n";
        } else if (*sweep_cmd) {
            DataFlags test_flags = data_flags;
            test_flags.data = test_data;
            Dataset data = load_data(data_flags);
            Dataset test = load_data(test_flags);
            std::vector<SweepPoint> points =
                sweep(data, test, read_grid(grid_path), to_config(learn_flags));
            std::ofstream file;
            std::ostream* os = &std::cout;
            if (!out_path.empty()) {
                file.open(out_path, std::ios::binary);
                if (!file) throw ConfigError("cannot write sweep output: " + out_path);
                os = &file;
            }
            for (const SweepPoint& point : points)
                *os << sweep_point_to_json(point).dump() << "\n";
        } else if (*stats_cmd) {
            RuleModel model = load_model(model_path);
            std::cout << stats_to_json(model_stats(model)).dump(2) << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
