#include "rulelift/harness.hpp"

#include <chrono>

#include "rulelift/error.hpp"
#include "rulelift/strings.hpp"

namespace rulelift {

using nlohmann::json;

EvaluationReport evaluate(const RuleModel& model, const Dataset& test, double beta) {
    if (beta < 0) throw ConfigError("beta must be non-negative");
    std::vector<LabelVector> predictions = predict_all(model, test);

    std::size_t n = test.label_count();
    EvaluationReport report;
    report.instance_count = test.instance_count();
    report.beta = beta;
    report.per_label.assign(n, {});
    std::size_t exact = 0;
    for (std::size_t j = 0; j < test.instance_count(); ++j) {
        bool all_match = true;
        for (std::size_t i = 0; i < n; ++i) {
            bool truth = test.labels[j][i] != 0;
            bool pred = predictions[j][i] != 0;
            ConfusionMatrix& cm = report.per_label[i];
            if (pred && truth)
                ++cm.tp;
            else if (pred && !truth)
                ++cm.fp;
            else if (!pred && truth)
                ++cm.fn;
            else
                ++cm.tn;
            if (pred != truth) all_match = false;
        }
        if (all_match) ++exact;
    }
    report.subset_accuracy = report.instance_count
                                 ? static_cast<double>(exact) /
                                       static_cast<double>(report.instance_count)
                                 : 0.0;

    HeuristicSpec prec{Measure::Precision, Averaging::Micro, beta};
    HeuristicSpec f{Measure::FMeasure, Averaging::Micro, beta};
    HeuristicSpec ha{Measure::HammingAccuracy, Averaging::Micro, beta};
    report.micro_precision = score(prec, report.per_label);
    report.micro_f = score(f, report.per_label);
    report.hamming_accuracy = score(ha, report.per_label);
    prec.averaging = Averaging::Macro;
    f.averaging = Averaging::Macro;
    report.macro_precision = score(prec, report.per_label);
    report.macro_f = score(f, report.per_label);
    return report;
}

double target_score(const EvaluationReport& report, const HeuristicSpec& spec) {
    switch (spec.measure) {
        case Measure::Precision:
            return spec.averaging == Averaging::Micro ? report.micro_precision
                                                      : report.macro_precision;
        case Measure::HammingAccuracy:
            return report.hamming_accuracy;
        case Measure::FMeasure:
            return spec.averaging == Averaging::Micro ? report.micro_f : report.macro_f;
    }
    throw ConfigError("unknown measure");
}

LiftFunction select_lift(const Dataset& train, const std::vector<LiftFunction>& candidates,
                         const LearnerConfig& config, std::size_t folds, LiftSelection* detail) {
    if (candidates.empty()) throw ConfigError("lift selection needs candidates");
    std::vector<std::vector<std::size_t>> fold_rows = stratified_folds(train, folds, config.seed);

    LiftSelection sel;
    sel.mean_scores.assign(candidates.size(), 0.0);
    std::size_t n = train.label_count();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        double total = 0.0;
        for (std::size_t f = 0; f < fold_rows.size(); ++f) {
            std::vector<std::size_t> train_rows;
            for (std::size_t g = 0; g < fold_rows.size(); ++g)
                if (g != f)
                    train_rows.insert(train_rows.end(), fold_rows[g].begin(), fold_rows[g].end());
            Dataset fold_train = subset(train, train_rows);
            Dataset fold_test = subset(train, fold_rows[f]);
            LearnerConfig fold_config = config;
            fold_config.lift = candidates[c];
            RuleModel model = learn(fold_train, fold_config);
            EvaluationReport report =
                evaluate(model, fold_test, config.heuristic.beta);
            total += target_score(report, config.heuristic);
        }
        sel.mean_scores[c] = total / static_cast<double>(fold_rows.size());
    }

    auto size2_lift = [&](const LiftFunction& f) {
        return n >= 2 ? lift_at(f, 2, n) : 1.0;
    };
    for (std::size_t c = 1; c < candidates.size(); ++c) {
        double diff = sel.mean_scores[c] - sel.mean_scores[sel.best_index];
        if (diff > 1e-12 ||
            (diff > -1e-12 &&
             size2_lift(candidates[c]) > size2_lift(candidates[sel.best_index]))) {
            sel.best_index = c;
        }
    }
    if (detail) *detail = sel;
    return candidates[sel.best_index];
}

std::vector<SweepPoint> sweep(const Dataset& train, const Dataset& test,
                              const std::vector<LiftFunction>& grid,
                              const LearnerConfig& config) {
    if (grid.empty()) throw ConfigError("sweep needs a non-empty grid");
    std::vector<SweepPoint> out;
    out.reserve(grid.size());
    for (const LiftFunction& lift : grid) {
        LearnerConfig point_config = config;
        point_config.lift = lift;
        SearchStats stats;
        auto t0 = std::chrono::steady_clock::now();
        RuleModel model = learn(train, point_config, &stats);
        auto t1 = std::chrono::steady_clock::now();
        SweepPoint point;
        point.lift = lift;
        point.stats = model_stats(model);
        point.report = evaluate(model, test, config.heuristic.beta);
        point.train_seconds = std::chrono::duration<double>(t1 - t0).count();
        point.instance_evaluations = stats.instance_evaluations;
        point.head_searches = stats.searches;
        out.push_back(std::move(point));
    }
    return out;
}

json report_to_json(const EvaluationReport& report) {
    json per_label = json::array();
    for (const ConfusionMatrix& cm : report.per_label)
        per_label.push_back({{"tp", cm.tp}, {"fp", cm.fp}, {"tn", cm.tn}, {"fn", cm.fn}});
    return {{"instance_count", report.instance_count},
            {"beta", report.beta},
            {"hamming_accuracy", report.hamming_accuracy},
            {"subset_accuracy", report.subset_accuracy},
            {"micro_precision", report.micro_precision},
            {"macro_precision", report.macro_precision},
            {"micro_f", report.micro_f},
            {"macro_f", report.macro_f},
            {"per_label", std::move(per_label)}};
}

json stats_to_json(const ModelStats& stats) {
    json j = {{"rule_count", stats.rule_count},
              {"condition_count", stats.condition_count},
              {"label_condition_count", stats.label_condition_count},
              {"multi_label_head_count", stats.multi_label_head_count},
              {"mean_conditions_per_rule", stats.mean_conditions_per_rule},
              {"mean_head_size", stats.mean_head_size}};
    if (stats.mean_labels_per_multi_label_head)
        j["mean_labels_per_multi_label_head"] = *stats.mean_labels_per_multi_label_head;
    else
        j["mean_labels_per_multi_label_head"] = nullptr;
    return j;
}

json sweep_point_to_json(const SweepPoint& point) {
    return {{"lift", format_lift(point.lift)},
            {"model", stats_to_json(point.stats)},
            {"evaluation", report_to_json(point.report)},
            {"train_seconds", point.train_seconds},
            {"instance_evaluations", point.instance_evaluations},
            {"head_searches", point.head_searches}};
}

}  // namespace rulelift
