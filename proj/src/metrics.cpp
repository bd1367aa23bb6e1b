#include "rulelift/metrics.hpp"

#include "rulelift/error.hpp"

namespace rulelift {

void check_heuristic(const HeuristicSpec& spec) {
    if (spec.measure == Measure::FMeasure && spec.beta < 0)
        throw ConfigError("beta must be non-negative");
}

Measure parse_measure(const std::string& name) {
    if (name == "precision") return Measure::Precision;
    if (name == "ha") return Measure::HammingAccuracy;
    if (name == "fm") return Measure::FMeasure;
    throw ConfigError("unknown measure: " + name);
}

Averaging parse_averaging(const std::string& name) {
    if (name == "micro") return Averaging::Micro;
    if (name == "macro") return Averaging::Macro;
    throw ConfigError("unknown averaging: " + name);
}

ConfusionMatrix atomic_confusion(bool truth, std::optional<bool> prediction) {
    ConfusionMatrix cm;
    if (prediction.has_value()) {
        if (*prediction == truth)
            cm.tp = 1;
        else
            cm.fp = 1;
    } else {
        if (truth)
            cm.fn = 1;
        else
            cm.tn = 1;
    }
    return cm;
}

double measure_value(const HeuristicSpec& spec, const ConfusionMatrix& cm) {
    auto ratio = [](double num, double den) { return den > 0 ? num / den : 0.0; };
    switch (spec.measure) {
        case Measure::Precision:
            return ratio(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fp));
        case Measure::HammingAccuracy:
            return ratio(static_cast<double>(cm.tp + cm.tn), static_cast<double>(cm.total()));
        case Measure::FMeasure: {
            if (spec.beta < 0) throw ConfigError("beta must be non-negative");
            double b2 = spec.beta * spec.beta;
            double num = (1.0 + b2) * static_cast<double>(cm.tp);
            double den = num + b2 * static_cast<double>(cm.fn) + static_cast<double>(cm.fp);
            return ratio(num, den);
        }
    }
    throw ConfigError("unknown measure");
}

double score(const HeuristicSpec& spec, const std::vector<ConfusionMatrix>& matrices) {
    if (matrices.empty()) throw ConfigError("score needs at least one matrix");
    if (spec.averaging == Averaging::Micro) {
        ConfusionMatrix sum;
        for (const ConfusionMatrix& cm : matrices) sum += cm;
        return measure_value(spec, sum);
    }
    double total = 0;
    for (const ConfusionMatrix& cm : matrices) total += measure_value(spec, cm);
    return total / static_cast<double>(matrices.size());
}

std::vector<ConfusionMatrix> head_confusions(const Head& head, const Dataset& data,
                                             const CoverageState& cov,
                                             const std::vector<std::size_t>& body_covered) {
    std::size_t m = data.instance_count();
    std::size_t n = data.label_count();
    if (cov.instance_count() != m || cov.label_count() != n)
        throw SchemaError("coverage state does not match dataset dimensions");

    std::vector<std::uint8_t> in_covered(m, 0);
    for (std::size_t j : body_covered) in_covered[j] = 1;

    std::vector<ConfusionMatrix> out(n);
    for (std::size_t j = 0; j < m; ++j) {
        if (cov.open_labels(j) == 0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            if (cov.covered(j, i)) continue;
            std::optional<bool> pred;
            if (in_covered[j]) pred = head.value_for(i);
            out[i] += atomic_confusion(data.labels[j][i] != 0, pred);
        }
    }
    return out;
}

}  // namespace rulelift
