#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rulelift/dataset.hpp"
#include "rulelift/head.hpp"

namespace rulelift {

struct Condition {
    enum class Kind { NominalEq, NumericLeq, NumericGt, LabelTest };

    Kind kind = Kind::NumericLeq;
    std::size_t attr = 0;           // NominalEq/NumericLeq/NumericGt
    double threshold = 0.0;         // NumericLeq/NumericGt
    std::size_t nominal_value = 0;  // NominalEq: index into the attribute's values
    std::size_t label = 0;          // LabelTest
    bool label_present = true;      // LabelTest: required predicted value

    bool operator==(const Condition&) const = default;
};

// Predicted-so-far label state of one instance while a decision list runs.
struct LabelState {
    std::vector<std::uint8_t> decided;
    std::vector<std::uint8_t> value;

    explicit LabelState(std::size_t label_count)
        : decided(label_count, 0), value(label_count, 0) {}
};

// Label tests are undefined (false) without a state.
bool condition_holds(const Condition& c, const std::vector<double>& instance,
                     const LabelState* state);

struct AssignmentStats {
    std::int64_t tp = 0;
    std::int64_t fp = 0;

    bool operator==(const AssignmentStats&) const = default;
};

struct Rule {
    std::vector<Condition> body;  // empty body covers everything
    Head head;
    std::vector<AssignmentStats> stats;  // parallel to head.assignments, induction-time

    bool operator==(const Rule&) const = default;
};

bool covers(const Rule& rule, const std::vector<double>& instance, const LabelState* state);

struct RuleModel {
    std::vector<Rule> rules;
    std::vector<Attribute> schema;
    std::vector<std::string> label_names;
    std::uint64_t schema_fingerprint = 0;
    std::string config_echo;

    bool operator==(const RuleModel&) const = default;
};

// Decision-list prediction: the first rule deciding a label wins; labels no
// rule decides default to absent.
LabelVector predict(const RuleModel& model, const std::vector<double>& instance);
std::vector<LabelVector> predict_all(const RuleModel& model, const Dataset& data);

std::string rule_to_text(const RuleModel& model, const Rule& rule);
std::string serialize(const RuleModel& model);
RuleModel parse_model(const std::string& text);
RuleModel load_model(const std::string& path);
void save_model(const RuleModel& model, const std::string& path);

struct ModelStats {
    std::size_t rule_count = 0;
    std::size_t condition_count = 0;
    std::size_t label_condition_count = 0;
    std::size_t multi_label_head_count = 0;
    double mean_conditions_per_rule = 0.0;
    double mean_head_size = 0.0;
    std::optional<double> mean_labels_per_multi_label_head;
};

ModelStats model_stats(const RuleModel& model);

}  // namespace rulelift
