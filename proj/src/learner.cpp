#include "rulelift/learner.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rulelift/error.hpp"
#include "rulelift/strings.hpp"

namespace rulelift {

namespace {

constexpr double kTieEps = 1e-12;

bool body_has(const std::vector<Condition>& body, const Condition& c) {
    return std::find(body.begin(), body.end(), c) != body.end();
}

std::vector<std::size_t> filter_covered(const Dataset& data, const TrainingState& state,
                                        const std::vector<std::size_t>& covered,
                                        const Condition& c) {
    std::vector<std::size_t> out;
    bool needs_state = c.kind == Condition::Kind::LabelTest;
    for (std::size_t j : covered) {
        if (needs_state) {
            LabelState ls = state.label_state(j);
            if (condition_holds(c, data.instances[j], &ls)) out.push_back(j);
        } else if (condition_holds(c, data.instances[j], nullptr)) {
            out.push_back(j);
        }
    }
    return out;
}

// Re-scores a fixed head on a new body coverage; same matrices the search
// would build, one instance pass per assignment.
HeadCandidate rescore_head(const Head& head, const Dataset& data, const TrainingState& state,
                           const std::vector<std::size_t>& body_covered,
                           const HeuristicSpec& spec, const LiftFunction& lift,
                           SearchStats* stats) {
    HeadCandidate hc;
    hc.head = head;
    std::vector<ConfusionMatrix> by_label = head_confusions(head, data, state.cov(), body_covered);
    if (stats) ++stats->instance_evaluations;  // one pass over the instances
    hc.per_assignment.reserve(head.size());
    for (const LabelAssignment& a : head.assignments)
        hc.per_assignment.push_back(by_label[a.label]);
    hc.h = score(spec, hc.per_assignment);
    hc.h_lifted = lifted_value(lift, hc.h, head.size(), data.label_count());
    return hc;
}

}  // namespace

LabelState TrainingState::label_state(std::size_t instance) const {
    LabelState ls(cov_.label_count());
    for (std::size_t i = 0; i < cov_.label_count(); ++i) {
        if (cov_.covered(instance, i)) {
            ls.decided[i] = 1;
            ls.value[i] = value_[instance][i];
        }
    }
    return ls;
}

std::vector<Condition> generate_refinements(const std::vector<Condition>& body,
                                            const Dataset& data, const TrainingState& state,
                                            const std::vector<std::size_t>& body_covered,
                                            bool label_conditions) {
    std::vector<Condition> out;
    std::size_t total = body_covered.size();
    if (total == 0) return out;

    for (std::size_t a = 0; a < data.attribute_count(); ++a) {
        const Attribute& attr = data.schema[a];
        if (attr.kind == Attribute::Kind::Nominal) {
            std::vector<std::size_t> counts(attr.values.size(), 0);
            for (std::size_t j : body_covered)
                ++counts[static_cast<std::size_t>(data.instances[j][a])];
            for (std::size_t v = 0; v < attr.values.size(); ++v) {
                if (counts[v] == 0 || counts[v] == total) continue;
                Condition c;
                c.kind = Condition::Kind::NominalEq;
                c.attr = a;
                c.nominal_value = v;
                if (!body_has(body, c)) out.push_back(c);
            }
        } else {
            std::set<double> values;
            for (std::size_t j : body_covered) values.insert(data.instances[j][a]);
            if (values.size() < 2) continue;
            double prev = 0;
            bool first = true;
            for (double v : values) {
                if (!first) {
                    double mid = prev + (v - prev) / 2.0;
                    for (Condition::Kind kind :
                         {Condition::Kind::NumericLeq, Condition::Kind::NumericGt}) {
                        Condition c;
                        c.kind = kind;
                        c.attr = a;
                        c.threshold = mid;
                        if (!body_has(body, c)) out.push_back(c);
                    }
                }
                prev = v;
                first = false;
            }
        }
    }

    if (label_conditions) {
        for (std::size_t i = 0; i < data.label_count(); ++i) {
            for (bool present : {true, false}) {
                std::size_t holds = 0;
                for (std::size_t j : body_covered) {
                    if (!state.cov().covered(j, i)) continue;
                    LabelState ls = state.label_state(j);
                    Condition probe;
                    probe.kind = Condition::Kind::LabelTest;
                    probe.label = i;
                    probe.label_present = present;
                    if (condition_holds(probe, data.instances[j], &ls)) ++holds;
                }
                if (holds == 0 || holds == total) continue;
                Condition c;
                c.kind = Condition::Kind::LabelTest;
                c.label = i;
                c.label_present = present;
                if (!body_has(body, c)) out.push_back(c);
            }
        }
    }
    return out;
}

std::optional<Rule> refine_rule(const Dataset& data, const TrainingState& state,
                                const LearnerConfig& config, SearchStats* stats) {
    std::vector<std::size_t> covered;
    for (std::size_t j = 0; j < data.instance_count(); ++j)
        if (state.cov().open_labels(j) > 0) covered.push_back(j);
    if (covered.empty()) return std::nullopt;

    struct Snapshot {
        std::vector<Condition> body;
        HeadCandidate head;
    };
    std::vector<Snapshot> snapshots;

    std::vector<Condition> body;
    std::optional<HeadCandidate> current =
        find_best_head(data, state.cov(), covered, config.heuristic, config.lift, config.mode,
                       stats);
    bool head_fixed = false;
    if (current) snapshots.push_back({body, *current});
    double current_value = current ? current->h_lifted : -1.0;

    while (true) {
        std::vector<Condition> candidates =
            generate_refinements(body, data, state, covered, config.label_conditions);
        std::optional<Condition> best_cond;
        std::optional<HeadCandidate> best_head;
        std::vector<std::size_t> best_covered;
        for (const Condition& cond : candidates) {
            std::vector<std::size_t> child = filter_covered(data, state, covered, cond);
            if (child.empty()) continue;
            std::optional<HeadCandidate> cand;
            if (!head_fixed) {
                cand = find_best_head(data, state.cov(), child, config.heuristic, config.lift,
                                      config.mode, stats);
            } else {
                cand = rescore_head(current->head, data, state, child, config.heuristic,
                                    config.lift, stats);
            }
            if (!cand) continue;
            if (!best_head || cand->h_lifted > best_head->h_lifted) {
                best_cond = cond;
                best_head = std::move(cand);
                best_covered = std::move(child);
            }
        }
        if (!best_head || best_head->h_lifted <= current_value + kTieEps) break;
        body.push_back(*best_cond);
        covered = std::move(best_covered);
        current = std::move(best_head);
        current_value = current->h_lifted;
        head_fixed = true;
        snapshots.push_back({body, *current});
    }

    // Deepest body whose head satisfies the acceptance constraints.
    for (auto it = snapshots.rbegin(); it != snapshots.rend(); ++it) {
        const HeadCandidate& hc = it->head;
        bool per_assignment_ok = true;
        for (const ConfusionMatrix& cm : hc.per_assignment)
            if (cm.tp < 1) per_assignment_ok = false;
        if (!per_assignment_ok || hc.tp_sum() < hc.fp_sum()) continue;
        Rule rule;
        rule.body = it->body;
        rule.head = hc.head;
        for (const ConfusionMatrix& cm : hc.per_assignment)
            rule.stats.push_back({cm.tp, cm.fp});
        return rule;
    }
    return std::nullopt;
}

RuleModel learn(const Dataset& data, const LearnerConfig& config, SearchStats* stats) {
    if (data.instance_count() == 0) throw ConfigError("training needs at least one instance");
    if (data.label_count() == 0) throw ConfigError("training needs at least one label");
    if (config.coverage_stop_fraction <= 0 || config.coverage_stop_fraction > 1)
        throw ConfigError("coverage stop fraction must be in (0, 1]");
    check_heuristic(config.heuristic);

    RuleModel model;
    model.schema = data.schema;
    model.label_names = data.label_names;
    model.schema_fingerprint = data.schema_fingerprint();
    model.config_echo = config_echo(config);

    TrainingState state(data.instance_count(), data.label_count());
    auto total = static_cast<double>(data.instance_count() * data.label_count());

    while (true) {
        double fraction = static_cast<double>(state.cov().covered_pairs()) / total;
        if (fraction >= config.coverage_stop_fraction) break;
        if (config.max_rules && model.rules.size() >= *config.max_rules) break;
        std::optional<Rule> rule = refine_rule(data, state, config, stats);
        if (!rule) break;

        bool needs_state = std::any_of(rule->body.begin(), rule->body.end(), [](const Condition& c) {
            return c.kind == Condition::Kind::LabelTest;
        });
        std::size_t before = state.cov().covered_pairs();
        for (std::size_t j = 0; j < data.instance_count(); ++j) {
            if (state.cov().open_labels(j) == 0) continue;
            if (needs_state) {
                LabelState ls = state.label_state(j);
                if (!covers(*rule, data.instances[j], &ls)) continue;
            } else if (!covers(*rule, data.instances[j], nullptr)) {
                continue;
            }
            for (const LabelAssignment& a : rule->head.assignments)
                state.mark(j, a.label, a.present);
        }
        model.rules.push_back(std::move(*rule));
        if (state.cov().covered_pairs() == before) break;  // no progress, defensive stop
    }
    return model;
}

std::string config_echo(const LearnerConfig& config) {
    std::string measure = config.heuristic.measure == Measure::Precision ? "precision"
                          : config.heuristic.measure == Measure::HammingAccuracy ? "ha"
                                                                                 : "fm";
    std::string avg = config.heuristic.averaging == Averaging::Micro ? "micro" : "macro";
    std::string out = "heuristic=" + measure + " averaging=" + avg;
    if (config.heuristic.measure == Measure::FMeasure)
        out += " beta=" + format_double(config.heuristic.beta);
    out += std::string(" mode=") + (config.mode.predict_absent ? "posneg" : "pos");
    out += " lift=" + format_lift(config.lift);
    out += " stop-fraction=" + format_double(config.coverage_stop_fraction);
    out += std::string(" label-conditions=") + (config.label_conditions ? "1" : "0");
    if (config.max_rules) out += " max-rules=" + std::to_string(*config.max_rules);
    out += " seed=" + std::to_string(config.seed);
    return out;
}

}  // namespace rulelift
