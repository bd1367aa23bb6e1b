#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rulelift/dataset.hpp"
#include "rulelift/head.hpp"

namespace rulelift {

struct ConfusionMatrix {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + fp + tn + fn; }
    ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }
    bool operator==(const ConfusionMatrix&) const = default;
};

enum class Measure { Precision, HammingAccuracy, FMeasure };
enum class Averaging { Micro, Macro };

struct HeuristicSpec {
    Measure measure = Measure::FMeasure;
    Averaging averaging = Averaging::Micro;
    double beta = 0.5;  // F-measure only
};

// Throws ConfigError on unusable settings (negative beta).
void check_heuristic(const HeuristicSpec& spec);

// Names as they appear on the command line and in config echoes.
Measure parse_measure(const std::string& name);      // precision | ha | fm
Averaging parse_averaging(const std::string& name);  // micro | macro

// Training-time cell for one (instance, label) pair. A made prediction is
// counted as tp when it matches the ground truth and fp otherwise; with no
// prediction the pair counts as tn (truth 0) or fn (truth 1).
ConfusionMatrix atomic_confusion(bool truth, std::optional<bool> prediction);

// The measure value of a single matrix; 0/0 evaluates to 0.
double measure_value(const HeuristicSpec& spec, const ConfusionMatrix& cm);

// Micro: measure of the cell-wise sum. Macro: mean of per-matrix values.
double score(const HeuristicSpec& spec, const std::vector<ConfusionMatrix>& matrices);

// Per-label training-time matrices for a candidate head, over every instance
// that still has at least one uncovered label. Instances listed in
// body_covered get the head's predictions, all others abstain. Pairs already
// covered by earlier rules are skipped entirely.
std::vector<ConfusionMatrix> head_confusions(const Head& head, const Dataset& data,
                                             const CoverageState& cov,
                                             const std::vector<std::size_t>& body_covered);

}  // namespace rulelift
