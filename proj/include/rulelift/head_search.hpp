#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rulelift/dataset.hpp"
#include "rulelift/lift.hpp"
#include "rulelift/metrics.hpp"

namespace rulelift {

struct SearchMode {
    // When set, absent-value assignments compete with present ones.
    bool predict_absent = false;
};

struct SingleLabelCandidate {
    LabelAssignment assignment;
    ConfusionMatrix confusion;
    double h = 0.0;
    bool eligible = false;  // tp >= 1
};

struct HeadCandidate {
    Head head;
    std::vector<ConfusionMatrix> per_assignment;  // parallel to head.assignments
    double h = 0.0;
    double h_lifted = 0.0;

    std::int64_t tp_sum() const;
    std::int64_t fp_sum() const;
};

// Counts full passes over the candidate instances (the unit the search's
// complexity bound is stated in).
struct SearchStats {
    std::uint64_t instance_evaluations = 0;
    std::uint64_t searches = 0;
};

// One inspected prefix of the candidate chain, for tracing.
struct SearchVisit {
    std::size_t size = 0;
    double h = 0.0;
    double h_lifted = 0.0;
    double h_upper = 0.0;
    bool valid = false;        // passed the tp/fp constraint
    bool became_best = false;
    bool pruned_after = false;
};

// Per-label candidates sorted by h descending, ties by ascending label index.
std::vector<SingleLabelCandidate> single_label_candidates(
    const Dataset& data, const CoverageState& cov, const std::vector<std::size_t>& body_covered,
    const HeuristicSpec& spec, const SearchMode& mode, SearchStats* stats = nullptr);

// Greedy prefix search over the sorted candidate chain with lift-aware
// pruning. Returns the best admissible head, or nullopt if none exists.
std::optional<HeadCandidate> find_best_head(const Dataset& data, const CoverageState& cov,
                                            const std::vector<std::size_t>& body_covered,
                                            const HeuristicSpec& spec, const LiftFunction& lift,
                                            const SearchMode& mode, SearchStats* stats = nullptr,
                                            std::vector<SearchVisit>* trace = nullptr);

// Reference search over every admissible head; exact tie-break: larger size,
// then lexicographically smaller assignment list. Refuses more than max_labels
// labels.
std::optional<HeadCandidate> exhaustive_best_head(const Dataset& data, const CoverageState& cov,
                                                  const std::vector<std::size_t>& body_covered,
                                                  const HeuristicSpec& spec,
                                                  const LiftFunction& lift, const SearchMode& mode,
                                                  std::size_t max_labels = 16);

}  // namespace rulelift
