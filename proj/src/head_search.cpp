#include "rulelift/head_search.hpp"

#include <algorithm>
#include <cmath>

#include "rulelift/error.hpp"

namespace rulelift {

namespace {

constexpr double kTieEps = 1e-12;

// Confusion over all open instances for one candidate assignment; instances in
// body_covered predict `present`, all others abstain. One instance pass.
ConfusionMatrix assignment_confusion(const Dataset& data, const CoverageState& cov,
                                     const std::vector<std::uint8_t>& in_covered,
                                     std::size_t label, bool present, SearchStats* stats) {
    if (stats) ++stats->instance_evaluations;
    ConfusionMatrix cm;
    for (std::size_t j = 0; j < data.instance_count(); ++j) {
        if (cov.open_labels(j) == 0) continue;
        if (cov.covered(j, label)) continue;
        std::optional<bool> pred;
        if (in_covered[j]) pred = present;
        cm += atomic_confusion(data.labels[j][label] != 0, pred);
    }
    return cm;
}

void check_lift_usable(const LiftFunction& lift, std::size_t n) {
    // Surface configuration problems before the search starts.
    lift_at(lift, 1, n);
}

}  // namespace

std::int64_t HeadCandidate::tp_sum() const {
    std::int64_t s = 0;
    for (const ConfusionMatrix& cm : per_assignment) s += cm.tp;
    return s;
}

std::int64_t HeadCandidate::fp_sum() const {
    std::int64_t s = 0;
    for (const ConfusionMatrix& cm : per_assignment) s += cm.fp;
    return s;
}

std::vector<SingleLabelCandidate> single_label_candidates(
    const Dataset& data, const CoverageState& cov, const std::vector<std::size_t>& body_covered,
    const HeuristicSpec& spec, const SearchMode& mode, SearchStats* stats) {
    if (body_covered.empty()) throw ConfigError("head search needs at least one covered instance");
    std::size_t m = data.instance_count();
    std::size_t n = data.label_count();
    if (cov.instance_count() != m || cov.label_count() != n)
        throw SchemaError("coverage state does not match dataset dimensions");

    std::vector<std::uint8_t> in_covered(m, 0);
    for (std::size_t j : body_covered) {
        if (j >= m) throw ConfigError("covered instance index out of range");
        in_covered[j] = 1;
    }

    std::vector<SingleLabelCandidate> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        SingleLabelCandidate cand;
        cand.assignment = {i, true};
        cand.confusion = assignment_confusion(data, cov, in_covered, i, true, stats);
        cand.h = measure_value(spec, cand.confusion);
        if (mode.predict_absent) {
            ConfusionMatrix neg = assignment_confusion(data, cov, in_covered, i, false, stats);
            double neg_h = measure_value(spec, neg);
            if (neg_h > cand.h) {  // ties keep the present value
                cand.assignment = {i, false};
                cand.confusion = neg;
                cand.h = neg_h;
            }
        }
        cand.eligible = cand.confusion.tp >= 1;
        out.push_back(std::move(cand));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const SingleLabelCandidate& a, const SingleLabelCandidate& b) {
                         if (a.h != b.h) return a.h > b.h;
                         return a.assignment.label < b.assignment.label;
                     });
    return out;
}

std::optional<HeadCandidate> find_best_head(const Dataset& data, const CoverageState& cov,
                                            const std::vector<std::size_t>& body_covered,
                                            const HeuristicSpec& spec, const LiftFunction& lift,
                                            const SearchMode& mode, SearchStats* stats,
                                            std::vector<SearchVisit>* trace) {
    std::size_t n = data.label_count();
    check_lift_usable(lift, n);
    if (stats) ++stats->searches;

    std::vector<SingleLabelCandidate> chain =
        single_label_candidates(data, cov, body_covered, spec, mode, stats);
    chain.erase(std::remove_if(chain.begin(), chain.end(),
                               [](const SingleLabelCandidate& c) { return !c.eligible; }),
                chain.end());
    if (chain.empty()) return std::nullopt;

    std::optional<HeadCandidate> best;
    Head head;
    std::vector<ConfusionMatrix> members;
    ConfusionMatrix sum;
    double h_sum = 0.0;
    std::int64_t tp_sum = 0, fp_sum = 0;

    for (std::size_t k = 0; k < chain.size(); ++k) {
        const SingleLabelCandidate& c = chain[k];
        head.add(c.assignment);
        members.push_back(c.confusion);
        sum += c.confusion;
        h_sum += c.h;
        tp_sum += c.confusion.tp;
        fp_sum += c.confusion.fp;

        std::size_t size = k + 1;
        double h = spec.averaging == Averaging::Micro ? measure_value(spec, sum)
                                                      : h_sum / static_cast<double>(size);
        double h_lifted = lifted_value(lift, h, size, n);
        bool valid = tp_sum >= fp_sum;
        bool became_best = false;
        if (valid && (!best || h_lifted >= best->h_lifted - kTieEps)) {
            HeadCandidate hc;
            hc.head = head;
            hc.per_assignment = members;
            hc.h = h;
            hc.h_lifted = h_lifted;
            best = std::move(hc);
            became_best = true;
        }

        double h_upper = h * max_remaining_lift(lift, size, n);
        bool prune = best && h_upper < best->h_lifted - kTieEps;
        if (trace)
            trace->push_back({size, h, h_lifted, h_upper, valid, became_best, prune});
        if (prune) break;
    }
    return best;
}

std::optional<HeadCandidate> exhaustive_best_head(const Dataset& data, const CoverageState& cov,
                                                  const std::vector<std::size_t>& body_covered,
                                                  const HeuristicSpec& spec,
                                                  const LiftFunction& lift, const SearchMode& mode,
                                                  std::size_t max_labels) {
    std::size_t n = data.label_count();
    if (n > max_labels)
        throw ConfigError("exhaustive search refuses more than " + std::to_string(max_labels) +
                          " labels");
    check_lift_usable(lift, n);

    std::vector<std::uint8_t> in_covered(data.instance_count(), 0);
    for (std::size_t j : body_covered) in_covered[j] = 1;

    // Matrices for every (label, value) assignment up front.
    std::vector<ConfusionMatrix> present(n), absent(n);
    for (std::size_t i = 0; i < n; ++i) {
        present[i] = assignment_confusion(data, cov, in_covered, i, true, nullptr);
        if (mode.predict_absent)
            absent[i] = assignment_confusion(data, cov, in_covered, i, false, nullptr);
    }

    std::optional<HeadCandidate> best;
    auto consider = [&](const std::vector<int>& digit) {
        HeadCandidate hc;
        ConfusionMatrix sum;
        double h_sum = 0.0;
        std::int64_t tp = 0, fp = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (digit[i] == 0) continue;
            bool value = digit[i] == 1;
            const ConfusionMatrix& cm = value ? present[i] : absent[i];
            if (cm.tp < 1) return;  // every assignment needs a true positive
            hc.head.add({i, value});
            hc.per_assignment.push_back(cm);
            sum += cm;
            h_sum += measure_value(spec, cm);
            tp += cm.tp;
            fp += cm.fp;
        }
        if (hc.head.empty() || tp < fp) return;
        hc.h = spec.averaging == Averaging::Micro
                   ? measure_value(spec, sum)
                   : h_sum / static_cast<double>(hc.head.size());
        hc.h_lifted = lifted_value(lift, hc.h, hc.head.size(), n);
        if (!best) {
            best = std::move(hc);
            return;
        }
        if (hc.h_lifted > best->h_lifted) {
            best = std::move(hc);
            return;
        }
        if (hc.h_lifted == best->h_lifted) {  // exact ties: larger, then lexicographic
            if (hc.head.size() > best->head.size() ||
                (hc.head.size() == best->head.size() &&
                 hc.head.assignments < best->head.assignments)) {
                best = std::move(hc);
            }
        }
    };

    std::vector<int> digit(n, 0);  // 0 skip, 1 present, 2 absent
    int radix = mode.predict_absent ? 3 : 2;
    while (true) {
        std::size_t pos = 0;
        while (pos < n) {
            if (++digit[pos] < radix) break;
            digit[pos] = 0;
            ++pos;
        }
        if (pos == n) break;
        consider(digit);
    }
    return best;
}

}  // namespace rulelift
