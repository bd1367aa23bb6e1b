#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rulelift/dataset.hpp"
#include "rulelift/head_search.hpp"
#include "rulelift/lift.hpp"
#include "rulelift/metrics.hpp"
#include "rulelift/rule_model.hpp"

namespace rulelift {

struct LearnerConfig {
    HeuristicSpec heuristic;
    LiftFunction lift;
    SearchMode mode;
    bool label_conditions = false;
    // Stop once this fraction of (instance, label) pairs is covered.
    double coverage_stop_fraction = 1.0;
    std::optional<std::size_t> max_rules;
    std::uint64_t seed = 0;
};

// Coverage plus the value each covered pair was predicted with (for label
// tests inside later rule bodies).
class TrainingState {
public:
    TrainingState(std::size_t instance_count, std::size_t label_count)
        : cov_(instance_count, label_count),
          value_(instance_count, std::vector<std::uint8_t>(label_count, 0)) {}

    CoverageState& cov() { return cov_; }
    const CoverageState& cov() const { return cov_; }

    void mark(std::size_t instance, std::size_t label, bool value) {
        if (cov_.mark(instance, label)) value_[instance][label] = value ? 1 : 0;
    }
    // Predicted-so-far view of one instance.
    LabelState label_state(std::size_t instance) const;

private:
    CoverageState cov_;
    std::vector<std::vector<std::uint8_t>> value_;
};

// Candidate single conditions extending the body, in deterministic generation
// order: schema order, nominal values by index, numeric midpoints ascending,
// then label tests. Only conditions that cover a non-empty strict subset of
// the body's current coverage are produced; exact duplicates of body
// conditions are dropped.
std::vector<Condition> generate_refinements(const std::vector<Condition>& body,
                                            const Dataset& data, const TrainingState& state,
                                            const std::vector<std::size_t>& body_covered,
                                            bool label_conditions);

// Grows one rule by greedy refinement. The head is re-searched for every
// candidate body until a refinement is first accepted; from then on it stays
// fixed and is only re-scored. Accepts refinements on strict improvement and
// finally backtracks to the deepest body whose head meets the tp/fp
// constraints. Returns nullopt when no admissible rule exists.
std::optional<Rule> refine_rule(const Dataset& data, const TrainingState& state,
                                const LearnerConfig& config, SearchStats* stats = nullptr);

// Separate-and-conquer loop producing the final decision list.
RuleModel learn(const Dataset& data, const LearnerConfig& config, SearchStats* stats = nullptr);

// Canonical one-line echo of a config, embedded in saved models.
std::string config_echo(const LearnerConfig& config);

}  // namespace rulelift
