#include "rulelift/rule_model.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rulelift/error.hpp"
#include "rulelift/strings.hpp"

namespace rulelift {

using nlohmann::json;

bool condition_holds(const Condition& c, const std::vector<double>& instance,
                     const LabelState* state) {
    switch (c.kind) {
        case Condition::Kind::NominalEq:
            return instance[c.attr] == static_cast<double>(c.nominal_value);
        case Condition::Kind::NumericLeq:
            return instance[c.attr] <= c.threshold;
        case Condition::Kind::NumericGt:
            return instance[c.attr] > c.threshold;
        case Condition::Kind::LabelTest:
            if (!state || !state->decided[c.label]) return false;
            return (state->value[c.label] != 0) == c.label_present;
    }
    return false;
}

bool covers(const Rule& rule, const std::vector<double>& instance, const LabelState* state) {
    for (const Condition& c : rule.body)
        if (!condition_holds(c, instance, state)) return false;
    return true;
}

LabelVector predict(const RuleModel& model, const std::vector<double>& instance) {
    if (instance.size() != model.schema.size())
        throw SchemaError("instance width does not match model schema");
    LabelState state(model.label_names.size());
    std::size_t undecided = model.label_names.size();
    for (const Rule& rule : model.rules) {
        if (undecided == 0) break;
        if (!covers(rule, instance, &state)) continue;
        for (const LabelAssignment& a : rule.head.assignments) {
            if (state.decided[a.label]) continue;
            state.decided[a.label] = 1;
            state.value[a.label] = a.present ? 1 : 0;
            --undecided;
        }
    }
    return state.value;  // undecided labels stay 0
}

std::vector<LabelVector> predict_all(const RuleModel& model, const Dataset& data) {
    if (data.schema_fingerprint() != model.schema_fingerprint)
        throw SchemaError("dataset schema does not match the model");
    std::vector<LabelVector> out;
    out.reserve(data.instance_count());
    for (const auto& row : data.instances) out.push_back(predict(model, row));
    return out;
}

// ---------------------------------------------------------------------------
// Text form

namespace {

std::string condition_to_text(const RuleModel& model, const Condition& c) {
    switch (c.kind) {
        case Condition::Kind::NominalEq:
            return model.schema[c.attr].name + "=" + model.schema[c.attr].values[c.nominal_value];
        case Condition::Kind::NumericLeq:
            return model.schema[c.attr].name + "<=" + format_double(c.threshold);
        case Condition::Kind::NumericGt:
            return model.schema[c.attr].name + ">" + format_double(c.threshold);
        case Condition::Kind::LabelTest:
            return c.label_present ? model.label_names[c.label]
                                   : model.label_names[c.label] + "=0";
    }
    return {};
}

json condition_to_json(const Condition& c) {
    switch (c.kind) {
        case Condition::Kind::NominalEq:
            return {{"kind", "nominal-eq"}, {"attr", c.attr}, {"value", c.nominal_value}};
        case Condition::Kind::NumericLeq:
            return {{"kind", "numeric-leq"}, {"attr", c.attr}, {"threshold", c.threshold}};
        case Condition::Kind::NumericGt:
            return {{"kind", "numeric-gt"}, {"attr", c.attr}, {"threshold", c.threshold}};
        case Condition::Kind::LabelTest:
            return {{"kind", "label-test"}, {"label", c.label}, {"present", c.label_present}};
    }
    throw ConfigError("unknown condition kind");
}

Condition condition_from_json(const json& j, const RuleModel& model) {
    Condition c;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "nominal-eq") {
        c.kind = Condition::Kind::NominalEq;
        c.attr = j.at("attr").get<std::size_t>();
        c.nominal_value = j.at("value").get<std::size_t>();
        if (c.attr >= model.schema.size() ||
            model.schema[c.attr].kind != Attribute::Kind::Nominal ||
            c.nominal_value >= model.schema[c.attr].values.size())
            throw ValueError("nominal condition out of schema range");
    } else if (kind == "numeric-leq" || kind == "numeric-gt") {
        c.kind = kind == "numeric-leq" ? Condition::Kind::NumericLeq : Condition::Kind::NumericGt;
        c.attr = j.at("attr").get<std::size_t>();
        c.threshold = j.at("threshold").get<double>();
        if (c.attr >= model.schema.size() ||
            model.schema[c.attr].kind != Attribute::Kind::Numeric)
            throw ValueError("numeric condition out of schema range");
    } else if (kind == "label-test") {
        c.kind = Condition::Kind::LabelTest;
        c.label = j.at("label").get<std::size_t>();
        c.label_present = j.at("present").get<bool>();
        if (c.label >= model.label_names.size())
            throw ValueError("label condition out of schema range");
    } else {
        throw ValueError("unknown condition kind '" + kind + "'");
    }
    return c;
}

}  // namespace

std::string rule_to_text(const RuleModel& model, const Rule& rule) {
    std::string out;
    for (std::size_t i = 0; i < rule.head.assignments.size(); ++i) {
        const LabelAssignment& a = rule.head.assignments[i];
        if (i) out += ", ";
        out += model.label_names[a.label];
        if (!a.present) out += "=0";
    }
    out += " <- ";
    if (rule.body.empty()) {
        out += "true";
    } else {
        for (std::size_t i = 0; i < rule.body.size(); ++i) {
            if (i) out += ", ";
            out += condition_to_text(model, rule.body[i]);
        }
    }
    std::int64_t tp = 0, fp = 0;
    for (const AssignmentStats& s : rule.stats) {
        tp += s.tp;
        fp += s.fp;
    }
    out += " (" + std::to_string(tp) + ", " + std::to_string(fp) + ")";
    return out;
}

std::string serialize(const RuleModel& model) {
    json j;
    j["version"] = 1;
    j["schema_fingerprint"] = format_hex64(model.schema_fingerprint);
    j["config"] = model.config_echo;
    j["label_names"] = model.label_names;
    json attrs = json::array();
    for (const Attribute& a : model.schema) {
        json ja;
        ja["name"] = a.name;
        ja["kind"] = a.kind == Attribute::Kind::Nominal ? "nominal" : "numeric";
        if (a.kind == Attribute::Kind::Nominal) ja["values"] = a.values;
        attrs.push_back(std::move(ja));
    }
    j["attributes"] = std::move(attrs);
    json rules = json::array();
    for (const Rule& r : model.rules) {
        json jr;
        json body = json::array();
        for (const Condition& c : r.body) body.push_back(condition_to_json(c));
        jr["body"] = std::move(body);
        json head = json::array();
        for (const LabelAssignment& a : r.head.assignments)
            head.push_back({{"label", a.label}, {"present", a.present}});
        jr["head"] = std::move(head);
        json stats = json::array();
        for (const AssignmentStats& s : r.stats) stats.push_back({{"tp", s.tp}, {"fp", s.fp}});
        jr["stats"] = std::move(stats);
        rules.push_back(std::move(jr));
    }
    j["rules"] = std::move(rules);

    std::string out = "# rule list v1\n";
    out += "# schema " + format_hex64(model.schema_fingerprint) + "\n";
    out += "# config " + model.config_echo + "\n";
    for (const Rule& r : model.rules) out += rule_to_text(model, r) + "\n";
    out += "# json " + j.dump() + "\n";
    return out;
}

RuleModel parse_model(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.size() < 4) throw ParseError("truncated model file", lines.size() + 1);
    if (lines[0] != "# rule list v1") throw ParseError("unrecognized model header", 1);
    std::uint64_t header_fingerprint = 0;
    if (lines[1].rfind("# schema ", 0) != 0 ||
        !parse_hex64(lines[1].substr(9), header_fingerprint))
        throw ParseError("malformed schema line", 2);
    if (lines[2].rfind("# config ", 0) != 0) throw ParseError("malformed config line", 3);
    std::string header_config = lines[2].substr(9);
    const std::string& last = lines.back();
    if (last.rfind("# json ", 0) != 0)
        throw ParseError("missing machine-readable section", lines.size());

    json j;
    try {
        j = json::parse(last.substr(7));
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid model JSON: ") + e.what(), lines.size());
    }

    RuleModel model;
    try {
        if (j.at("version").get<int>() != 1) throw ValueError("unsupported model version");
        model.config_echo = j.at("config").get<std::string>();
        model.label_names = j.at("label_names").get<std::vector<std::string>>();
        for (const json& ja : j.at("attributes")) {
            Attribute a;
            a.name = ja.at("name").get<std::string>();
            std::string kind = ja.at("kind").get<std::string>();
            if (kind == "nominal") {
                a.kind = Attribute::Kind::Nominal;
                a.values = ja.at("values").get<std::vector<std::string>>();
            } else if (kind == "numeric") {
                a.kind = Attribute::Kind::Numeric;
            } else {
                throw ValueError("unknown attribute kind '" + kind + "'");
            }
            model.schema.push_back(std::move(a));
        }
        std::uint64_t stored = 0;
        if (!parse_hex64(j.at("schema_fingerprint").get<std::string>(), stored))
            throw ValueError("malformed schema fingerprint");
        model.schema_fingerprint = stored;
        for (const json& jr : j.at("rules")) {
            Rule r;
            for (const json& jc : jr.at("body")) r.body.push_back(condition_from_json(jc, model));
            for (const json& ja : jr.at("head")) {
                std::size_t label = ja.at("label").get<std::size_t>();
                if (label >= model.label_names.size())
                    throw ValueError("head label out of range");
                r.head.add({label, ja.at("present").get<bool>()});
            }
            if (r.head.empty()) throw ValueError("rule with empty head");
            for (const json& js : jr.at("stats"))
                r.stats.push_back({js.at("tp").get<std::int64_t>(),
                                   js.at("fp").get<std::int64_t>()});
            if (r.stats.size() != r.head.size())
                throw ValueError("rule stats do not match head size");
            model.rules.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid model JSON: ") + e.what(), lines.size());
    }

    // Cross-checks between the display section and the machine section.
    Dataset probe;
    probe.schema = model.schema;
    probe.label_names = model.label_names;
    if (probe.schema_fingerprint() != model.schema_fingerprint)
        throw ParseError("schema fingerprint does not match attributes", 2);
    if (header_fingerprint != model.schema_fingerprint)
        throw ParseError("schema line disagrees with machine section", 2);
    if (header_config != model.config_echo)
        throw ParseError("config line disagrees with machine section", 3);
    std::size_t rule_lines = lines.size() - 4;
    if (rule_lines != model.rules.size())
        throw ParseError("rule line count does not match machine section", lines.size());
    for (std::size_t r = 0; r < model.rules.size(); ++r) {
        if (lines[3 + r] != rule_to_text(model, model.rules[r]))
            throw ParseError("rule line disagrees with machine section", 4 + r);
    }
    return model;
}

RuleModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValueError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

void save_model(const RuleModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValueError("cannot open file for writing: " + path);
    out << serialize(model);
}

ModelStats model_stats(const RuleModel& model) {
    ModelStats s;
    s.rule_count = model.rules.size();
    std::size_t head_total = 0, multi_total = 0;
    for (const Rule& r : model.rules) {
        s.condition_count += r.body.size();
        for (const Condition& c : r.body)
            if (c.kind == Condition::Kind::LabelTest) ++s.label_condition_count;
        head_total += r.head.size();
        if (r.head.size() > 1) {
            ++s.multi_label_head_count;
            multi_total += r.head.size();
        }
    }
    if (s.rule_count) {
        s.mean_conditions_per_rule =
            static_cast<double>(s.condition_count) / static_cast<double>(s.rule_count);
        s.mean_head_size = static_cast<double>(head_total) / static_cast<double>(s.rule_count);
    }
    if (s.multi_label_head_count)
        s.mean_labels_per_multi_label_head =
            static_cast<double>(multi_total) / static_cast<double>(s.multi_label_head_count);
    return s;
}

}  // namespace rulelift
