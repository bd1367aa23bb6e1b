#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>

#include "rulelift/rule_model.hpp"
#include "rulelift/strings.hpp"
#include "support/fixtures.hpp"

using namespace rulelift;

namespace {

RuleModel demo_model() {
    RuleModel model;
    Attribute a;
    a.name = "A";
    a.kind = Attribute::Kind::Nominal;
    a.values = {"a", "b"};
    Attribute b;
    b.name = "B";
    b.kind = Attribute::Kind::Numeric;
    model.schema = {a, b};
    model.label_names = {"l1", "l2"};
    Dataset probe;
    probe.schema = model.schema;
    probe.label_names = model.label_names;
    model.schema_fingerprint = probe.schema_fingerprint();
    model.config_echo = "heuristic=fm averaging=micro beta=0.5 mode=pos lift=none "
                        "stop-fraction=1 label-conditions=0 seed=0";
    return model;
}

Condition nominal_eq(std::size_t attr, std::size_t value) {
    Condition c;
    c.kind = Condition::Kind::NominalEq;
    c.attr = attr;
    c.nominal_value = value;
    return c;
}

Condition numeric_gt(std::size_t attr, double threshold) {
    Condition c;
    c.kind = Condition::Kind::NumericGt;
    c.attr = attr;
    c.threshold = threshold;
    return c;
}

Condition label_test(std::size_t label, bool present) {
    Condition c;
    c.kind = Condition::Kind::LabelTest;
    c.label = label;
    c.label_present = present;
    return c;
}

std::mt19937_64& shared_rng() {
    static std::mt19937_64 rng(91);
    return rng;
}

RuleModel random_model(std::mt19937_64& rng, std::size_t rule_count) {
    RuleModel model;
    std::size_t attrs = 1 + rng() % 4;
    for (std::size_t a = 0; a < attrs; ++a) {
        Attribute attr;
        attr.name = "at" + std::to_string(a);
        if (rng() % 2) {
            attr.kind = Attribute::Kind::Nominal;
            std::size_t vals = 2 + rng() % 3;
            for (std::size_t v = 0; v < vals; ++v)
                attr.values.push_back("v" + std::to_string(v));
        } else {
            attr.kind = Attribute::Kind::Numeric;
        }
        model.schema.push_back(std::move(attr));
    }
    std::size_t n = 1 + rng() % 5;
    for (std::size_t i = 0; i < n; ++i) model.label_names.push_back("lb" + std::to_string(i));
    Dataset probe;
    probe.schema = model.schema;
    probe.label_names = model.label_names;
    model.schema_fingerprint = probe.schema_fingerprint();
    model.config_echo = "heuristic=ha averaging=micro mode=posneg lift=kln:k=0.2 "
                        "stop-fraction=1 label-conditions=1 seed=" +
                        std::to_string(rng() % 100);

    std::uniform_real_distribution<double> value(-5.0, 5.0);
    for (std::size_t r = 0; r < rule_count; ++r) {
        Rule rule;
        std::size_t conds = rng() % 4;
        for (std::size_t c = 0; c < conds; ++c) {
            switch (rng() % 3) {
                case 0: {
                    std::size_t a = rng() % model.schema.size();
                    if (model.schema[a].kind == Attribute::Kind::Nominal) {
                        rule.body.push_back(nominal_eq(a, rng() % model.schema[a].values.size()));
                    } else {
                        Condition cond;
                        cond.kind = rng() % 2 ? Condition::Kind::NumericLeq
                                              : Condition::Kind::NumericGt;
                        cond.attr = a;
                        cond.threshold = value(rng);
                        rule.body.push_back(cond);
                    }
                    break;
                }
                case 1: {
                    std::size_t a = rng() % model.schema.size();
                    if (model.schema[a].kind == Attribute::Kind::Numeric) {
                        rule.body.push_back(numeric_gt(a, value(rng)));
                    } else {
                        rule.body.push_back(nominal_eq(a, 0));
                    }
                    break;
                }
                default:
                    rule.body.push_back(label_test(rng() % n, rng() % 2 == 0));
                    break;
            }
        }
        std::size_t head_size = 1 + rng() % n;
        std::vector<std::size_t> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = i;
        std::shuffle(labels.begin(), labels.end(), rng);
        for (std::size_t i = 0; i < head_size; ++i) {
            rule.head.add({labels[i], rng() % 2 == 0});
            rule.stats.push_back({1 + static_cast<std::int64_t>(rng() % 200),
                                  static_cast<std::int64_t>(rng() % 100)});
        }
        model.rules.push_back(std::move(rule));
    }
    return model;
}

}  // namespace

TEST_CASE("condition evaluation semantics") {
    std::vector<double> row{0.0, 2.0};  // A=a, B=2.0
    CHECK(condition_holds(nominal_eq(0, 0), row, nullptr));
    CHECK_FALSE(condition_holds(nominal_eq(0, 1), row, nullptr));
    CHECK_FALSE(condition_holds(numeric_gt(1, 2.0), row, nullptr));

    Condition leq;
    leq.kind = Condition::Kind::NumericLeq;
    leq.attr = 1;
    leq.threshold = 2.0;
    CHECK(condition_holds(leq, row, nullptr));

    LabelState state(2);
    CHECK_FALSE(condition_holds(label_test(1, true), row, &state));  // undecided fails
    CHECK_FALSE(condition_holds(label_test(1, true), row, nullptr));
    state.decided[1] = 1;
    state.value[1] = 1;
    CHECK(condition_holds(label_test(1, true), row, &state));
    CHECK_FALSE(condition_holds(label_test(1, false), row, &state));
}

TEST_CASE("empty body covers everything") {
    Rule r;
    r.head.add({0, true});
    CHECK(covers(r, {1.0, 2.0}, nullptr));
}

TEST_CASE("earlier rules win on disputed labels") {
    RuleModel model = demo_model();
    Rule r1;
    r1.body.push_back(nominal_eq(0, 0));
    r1.head.add({0, true});
    r1.stats.push_back({3, 0});
    Rule r2;
    r2.body.push_back(numeric_gt(1, 2.0));
    r2.head.add({0, false});
    r2.head.add({1, true});
    r2.stats = {{2, 1}, {2, 0}};
    model.rules = {r1, r2};

    LabelVector out = predict(model, {0.0, 3.0});  // matches both rules
    CHECK(out == LabelVector{1, 1});
    out = predict(model, {1.0, 3.0});  // only rule 2
    CHECK(out == LabelVector{0, 1});
    out = predict(model, {1.0, 1.0});  // nothing covers: default absent
    CHECK(out == LabelVector{0, 0});
}

TEST_CASE("empty model predicts all-absent") {
    RuleModel model = demo_model();
    CHECK(predict(model, {0.0, 0.0}) == LabelVector{0, 0});
}

TEST_CASE("predict validates the instance width") {
    RuleModel model = demo_model();
    CHECK_THROWS_AS(predict(model, {0.0}), SchemaError);
}

TEST_CASE("predict_all validates the schema fingerprint") {
    RuleModel model = demo_model();
    Dataset other = parse_csv_dataset("x,l\n1,0\n", 1);
    CHECK_THROWS_AS(predict_all(model, other), SchemaError);
}

TEST_CASE("rule text follows the display grammar") {
    RuleModel model;
    Attribute att;
    att.name = "Att61";
    att.kind = Attribute::Kind::Numeric;
    model.schema = {att};
    model.label_names = {"Class1", "Class2", "Class3", "Class4", "Class5"};

    Rule r;
    r.body.push_back(numeric_gt(0, 0.5));
    r.head.add({4, true});
    r.stats.push_back({112, 50});
    CHECK(rule_to_text(model, r) == "Class5 <- Att61>0.5 (112, 50)");

    Rule r2;
    r2.head.add({0, true});
    r2.head.add({1, false});
    r2.stats = {{10, 2}, {5, 1}};
    CHECK(rule_to_text(model, r2) == "Class1, Class2=0 <- true (15, 3)");
}

TEST_CASE("serialization round-trips exactly") {
    RuleModel model = demo_model();
    Rule r1;
    r1.body.push_back(nominal_eq(0, 1));
    r1.body.push_back(numeric_gt(1, 0.125));
    r1.head.add({0, true});
    r1.stats.push_back({7, 2});
    Rule r2;
    r2.body.push_back(label_test(0, true));
    r2.head.add({1, false});
    r2.stats.push_back({4, 1});
    model.rules = {r1, r2};

    std::string text = serialize(model);
    RuleModel back = parse_model(text);
    CHECK(back == model);
    CHECK(serialize(back) == text);
}

TEST_CASE("serialization round-trips on random models") {
    auto& rng = shared_rng();
    for (int round = 0; round < 100; ++round) {
        RuleModel model = random_model(rng, rng() % 12);
        std::string text = serialize(model);
        RuleModel back = parse_model(text);
        CHECK(back == model);
        CHECK(serialize(back) == text);
    }
}

TEST_CASE("parser reports malformed input with line numbers") {
    RuleModel model = demo_model();
    Rule r;
    r.body.push_back(numeric_gt(1, 1.5));
    r.head.add({0, true});
    r.stats.push_back({5, 0});
    model.rules = {r};
    std::string text = serialize(model);

    CHECK_THROWS_AS(parse_model(""), ParseError);
    CHECK_THROWS_AS(parse_model("garbage\n"), ParseError);

    {
        std::string bad = text;
        bad.replace(bad.find("rule list v1"), 12, "rule list v9");
        CHECK_THROWS_AS(parse_model(bad), ParseError);
    }
    {
        // Tamper with the displayed rule line: mismatch against machine section.
        std::string bad = text;
        std::size_t pos = bad.find("1.5");
        bad.replace(pos, 3, "9.5");
        try {
            parse_model(bad);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 4);
        }
    }
    {
        std::string bad = text;
        std::size_t pos = bad.find("# json");
        bad = bad.substr(0, pos);
        CHECK_THROWS_AS(parse_model(bad), ParseError);
    }
    {
        std::string bad = text;
        std::size_t pos = bad.find("\"tp\":5");
        REQUIRE(pos != std::string::npos);
        bad.replace(pos, 6, "\"tp\":6");  // stats disagree with the rule line now
        CHECK_THROWS_AS(parse_model(bad), ParseError);
    }
}

TEST_CASE("model statistics") {
    auto& rng = shared_rng();
    RuleModel model = random_model(rng, 0);
    while (model.label_names.size() < 3) model = random_model(rng, 0);
    auto add_rule = [&](std::size_t head_size, std::size_t conds) {
        Rule r;
        for (std::size_t c = 0; c < conds; ++c) r.body.push_back(label_test(0, true));
        for (std::size_t i = 0; i < head_size; ++i) {
            r.head.add({i, true});
            r.stats.push_back({1, 0});
        }
        model.rules.push_back(r);
    };
    add_rule(1, 2);
    add_rule(1, 0);
    add_rule(2, 1);
    add_rule(3, 3);
    ModelStats s = model_stats(model);
    CHECK(s.rule_count == 4);
    CHECK(s.condition_count == 6);
    CHECK(s.label_condition_count == 6);
    CHECK(s.multi_label_head_count == 2);
    REQUIRE(s.mean_labels_per_multi_label_head.has_value());
    CHECK(*s.mean_labels_per_multi_label_head == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(s.mean_conditions_per_rule == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(s.mean_head_size == doctest::Approx(7.0 / 4.0).epsilon(1e-12));

    model.rules.clear();
    add_rule(1, 1);
    s = model_stats(model);
    CHECK(s.multi_label_head_count == 0);
    CHECK_FALSE(s.mean_labels_per_multi_label_head.has_value());
}

TEST_CASE("a 140-rule 219-condition model reports those exact counts") {
    auto& rng = shared_rng();
    RuleModel model = random_model(rng, 0);
    for (std::size_t r = 0; r < 140; ++r) {
        Rule rule;
        std::size_t take = r < 79 ? 2 : 1;  // 79*2 + 61*1 = 219
        for (std::size_t c = 0; c < take; ++c) rule.body.push_back(label_test(0, true));
        rule.head.add({0, true});
        rule.stats.push_back({1, 0});
        model.rules.push_back(rule);
    }
    ModelStats s = model_stats(model);
    CHECK(s.rule_count == 140);
    CHECK(s.condition_count == 219);
}

TEST_CASE("prediction is a pure function of model and instance") {
    auto& rng = shared_rng();
    for (int round = 0; round < 20; ++round) {
        RuleModel model = random_model(rng, 5);
        std::vector<double> row;
        for (const Attribute& a : model.schema)
            row.push_back(a.kind == Attribute::Kind::Nominal
                              ? static_cast<double>(rng() % a.values.size())
                              : static_cast<double>(rng() % 10) - 5.0);
        CHECK(predict(model, row) == predict(model, row));
    }
}
