#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rulelift/dataset.hpp"
#include "rulelift/learner.hpp"
#include "rulelift/rule_model.hpp"

namespace rulelift {

// Standard test-time quality report: predictions are compared to ground truth
// directly, no abstention bookkeeping.
struct EvaluationReport {
    std::size_t instance_count = 0;
    double beta = 1.0;
    std::vector<ConfusionMatrix> per_label;
    double hamming_accuracy = 0.0;
    double subset_accuracy = 0.0;
    double micro_precision = 0.0;
    double macro_precision = 0.0;
    double micro_f = 0.0;
    double macro_f = 0.0;
};

EvaluationReport evaluate(const RuleModel& model, const Dataset& test, double beta = 1.0);

// Score used for model selection: the config's own target measure.
double target_score(const EvaluationReport& report, const HeuristicSpec& spec);

// Cross-validated pick from candidate lifts; ties go to the stronger lift at
// size 2.
struct LiftSelection {
    std::size_t best_index = 0;
    std::vector<double> mean_scores;
};
LiftFunction select_lift(const Dataset& train, const std::vector<LiftFunction>& candidates,
                         const LearnerConfig& config, std::size_t folds,
                         LiftSelection* detail = nullptr);

struct SweepPoint {
    LiftFunction lift;
    ModelStats stats;
    EvaluationReport report;
    double train_seconds = 0.0;
    std::uint64_t instance_evaluations = 0;
    std::uint64_t head_searches = 0;
};

// Trains once per grid entry on train, evaluates on test.
std::vector<SweepPoint> sweep(const Dataset& train, const Dataset& test,
                              const std::vector<LiftFunction>& grid, const LearnerConfig& config);

nlohmann::json report_to_json(const EvaluationReport& report);
nlohmann::json stats_to_json(const ModelStats& stats);
nlohmann::json sweep_point_to_json(const SweepPoint& point);

}  // namespace rulelift
