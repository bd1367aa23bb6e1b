#include "rulelift/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "rulelift/strings.hpp"

namespace rulelift {

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValueError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// One parsed CSV record plus the line it started on.
struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;
};

// RFC 4180 reader: quoted fields may contain commas, doubled quotes and newlines.
std::vector<CsvRecord> read_csv_records(const std::string& text) {
    std::vector<CsvRecord> records;
    std::size_t line = 1;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        CsvRecord rec;
        rec.line = line;
        std::string field;
        bool quoted = false;
        bool any = false;
        while (true) {
            if (quoted) {
                if (i >= n) throw ParseError("unterminated quoted field", rec.line);
                char c = text[i++];
                if (c == '"') {
                    if (i < n && text[i] == '"') {
                        field += '"';
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    if (c == '\n') ++line;
                    field += c;
                }
                continue;
            }
            if (i >= n || text[i] == '\n' || text[i] == '\r') {
                rec.fields.push_back(std::move(field));
                if (i < n && text[i] == '\r') ++i;
                if (i < n && text[i] == '\n') {
                    ++i;
                    ++line;
                }
                break;
            }
            char c = text[i++];
            if (c == ',') {
                rec.fields.push_back(std::move(field));
                field.clear();
                any = true;
            } else if (c == '"' && field.empty()) {
                quoted = true;
            } else {
                field += c;
            }
        }
        bool blank = rec.fields.size() == 1 && !any && trim(rec.fields[0]).empty();
        if (!blank) records.push_back(std::move(rec));
    }
    return records;
}

std::string csv_escape(const std::string& s) {
    bool needs = s.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs && !s.empty() &&
        (std::isspace(static_cast<unsigned char>(s.front())) ||
         std::isspace(static_cast<unsigned char>(s.back()))))
        needs = true;
    if (!needs) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::uint8_t parse_label_cell(std::string_view cell, std::size_t line) {
    double v = 0;
    if (!parse_double(cell, v) || (v != 0.0 && v != 1.0))
        throw ValueError("label value must be 0 or 1, got '" + std::string(trim(cell)) +
                         "' (line " + std::to_string(line) + ")");
    return v == 1.0 ? 1 : 0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dataset

std::uint64_t Dataset::schema_fingerprint() const {
    std::uint64_t h = fnv1a64("schema/v1");
    auto mix = [&h](std::string_view part) {
        h = fnv1a64(part, h);
        h = fnv1a64("\x1f", h);
    };
    for (const Attribute& a : schema) {
        mix(a.name);
        mix(a.kind == Attribute::Kind::Nominal ? "nominal" : "numeric");
        for (const std::string& v : a.values) mix(v);
        mix("\x1e");
    }
    mix("labels");
    for (const std::string& name : label_names) mix(name);
    return h;
}

std::string Dataset::cell_text(std::size_t row, std::size_t attr) const {
    double v = instances[row][attr];
    if (schema[attr].kind == Attribute::Kind::Nominal) {
        auto idx = static_cast<std::size_t>(v);
        return schema[attr].values[idx];
    }
    return format_double(v);
}

void Dataset::validate() const {
    if (label_names.empty()) throw SchemaError("dataset has no labels");
    if (instances.size() != labels.size())
        throw SchemaError("instance/label row count mismatch");
    std::unordered_set<std::string> seen;
    for (const Attribute& a : schema) {
        if (!seen.insert(a.name).second) throw SchemaError("duplicate attribute name: " + a.name);
        if (a.kind == Attribute::Kind::Nominal) {
            std::unordered_set<std::string> vals;
            if (a.values.empty()) throw SchemaError("nominal attribute without values: " + a.name);
            for (const std::string& v : a.values)
                if (!vals.insert(v).second)
                    throw SchemaError("duplicate nominal value '" + v + "' in " + a.name);
        }
    }
    for (std::size_t r = 0; r < instances.size(); ++r) {
        if (instances[r].size() != schema.size()) throw SchemaError("row width mismatch");
        if (labels[r].size() != label_names.size()) throw SchemaError("label width mismatch");
        for (std::size_t a = 0; a < schema.size(); ++a) {
            if (schema[a].kind == Attribute::Kind::Nominal) {
                double v = instances[r][a];
                if (v < 0 || v >= static_cast<double>(schema[a].values.size()) ||
                    v != static_cast<double>(static_cast<std::size_t>(v)))
                    throw ValueError("nominal cell out of range in " + schema[a].name);
            }
        }
        for (std::uint8_t y : labels[r])
            if (y > 1) throw ValueError("label cell must be 0 or 1");
    }
}

// ---------------------------------------------------------------------------
// CoverageState

CoverageState::CoverageState(std::size_t instance_count, std::size_t label_count)
    : instance_count_(instance_count),
      label_count_(label_count),
      flags_(instance_count * label_count, 0),
      open_(instance_count, label_count) {
    if (label_count == 0) throw ConfigError("coverage state needs at least one label");
}

bool CoverageState::mark(std::size_t instance, std::size_t label) {
    std::uint8_t& f = flags_[instance * label_count_ + label];
    if (f) return false;
    f = 1;
    ++covered_pairs_;
    --open_[instance];
    return true;
}

std::size_t uncovered_pairs(const Dataset& data, const CoverageState& cov) {
    if (cov.instance_count() != data.instance_count() || cov.label_count() != data.label_count())
        throw SchemaError("coverage state does not match dataset dimensions");
    return data.instance_count() * data.label_count() - cov.covered_pairs();
}

// ---------------------------------------------------------------------------
// Mulan ARFF + XML

namespace {

// Splits "@keyword rest" and lowercases the keyword.
bool arff_keyword(std::string_view line, std::string& keyword, std::string& rest) {
    line = trim(line);
    if (line.empty() || line[0] != '@') return false;
    std::size_t sp = line.find_first_of(" \t");
    keyword = to_lower(sp == std::string_view::npos ? line.substr(1) : line.substr(1, sp - 1));
    rest = sp == std::string_view::npos ? "" : std::string(trim(line.substr(sp + 1)));
    return true;
}

// Reads one possibly-quoted token; advances pos past it.
std::string read_token(const std::string& s, std::size_t& pos, std::size_t line) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size()) throw ParseError("unexpected end of declaration", line);
    char quote = s[pos];
    if (quote == '\'' || quote == '"') {
        ++pos;
        std::string out;
        while (pos < s.size() && s[pos] != quote) out += s[pos++];
        if (pos >= s.size()) throw ParseError("unterminated quoted name", line);
        ++pos;
        return out;
    }
    std::string out;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos]))) out += s[pos++];
    return out;
}

std::vector<std::string> split_nominal_values(std::string_view body, std::size_t line) {
    std::vector<std::string> values;
    std::string cur;
    bool in_quote = false;
    char quote = 0;
    bool cur_quoted = false;
    bool quote_closed = false;
    auto flush = [&]() {
        std::string v = cur_quoted ? cur : std::string(trim(cur));
        if (v.empty() && !cur_quoted) throw ParseError("empty nominal value", line);
        values.push_back(std::move(v));
        cur.clear();
        cur_quoted = false;
        quote_closed = false;
    };
    for (char c : body) {
        if (in_quote) {
            if (c == quote) {
                in_quote = false;
                quote_closed = true;
            } else {
                cur += c;
            }
        } else if (quote_closed && c != ',') {
            if (!std::isspace(static_cast<unsigned char>(c)))
                throw ParseError("unexpected text after quoted value", line);
        } else if ((c == '\'' || c == '"') && trim(cur).empty() && !cur_quoted) {
            in_quote = true;
            quote = c;
            cur_quoted = true;
        } else if (c == ',') {
            flush();
        } else {
            cur += c;
        }
    }
    if (in_quote) throw ParseError("unterminated quoted value", line);
    flush();
    return values;
}

std::vector<std::string> split_data_row(const std::string& line_text, std::size_t line) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quote = false;
    char quote = 0;
    bool cur_quoted = false;
    bool quote_closed = false;
    auto flush = [&]() {
        fields.push_back(cur_quoted ? cur : std::string(trim(cur)));
        cur.clear();
        cur_quoted = false;
        quote_closed = false;
    };
    for (char c : line_text) {
        if (in_quote) {
            if (c == quote) {
                in_quote = false;
                quote_closed = true;
            } else {
                cur += c;
            }
        } else if (quote_closed && c != ',') {
            if (!std::isspace(static_cast<unsigned char>(c)))
                throw ParseError("unexpected text after quoted field", line);
        } else if ((c == '\'' || c == '"') && trim(cur).empty() && !cur_quoted) {
            in_quote = true;
            quote = c;
            cur_quoted = true;
        } else if (c == ',') {
            flush();
        } else {
            cur += c;
        }
    }
    if (in_quote) throw ParseError("unterminated quoted field", line);
    flush();
    return fields;
}

std::vector<std::string> parse_label_list_xml(const std::string& xml_text) {
    std::vector<std::string> names;
    std::size_t pos = 0;
    std::string lower = to_lower(xml_text);
    while (true) {
        std::size_t tag = lower.find("<label", pos);
        if (tag == std::string::npos) break;
        // Skip <labels ...> wrappers.
        std::size_t after = tag + 6;
        if (after < lower.size() && (std::isalnum(static_cast<unsigned char>(lower[after])))) {
            pos = after;
            continue;
        }
        std::size_t end = xml_text.find('>', tag);
        if (end == std::string::npos) throw ParseError("unterminated <label> tag", 1);
        std::string tag_text = xml_text.substr(tag, end - tag);
        std::size_t at = to_lower(tag_text).find("name");
        if (at == std::string::npos) throw ParseError("<label> tag without name attribute", 1);
        std::size_t eq = tag_text.find('=', at);
        if (eq == std::string::npos) throw ParseError("<label> tag without name attribute", 1);
        std::size_t q = tag_text.find_first_of("\"'", eq);
        if (q == std::string::npos) throw ParseError("<label> name must be quoted", 1);
        char quote = tag_text[q];
        std::size_t close = tag_text.find(quote, q + 1);
        if (close == std::string::npos) throw ParseError("unterminated label name", 1);
        names.push_back(tag_text.substr(q + 1, close - q - 1));
        pos = end + 1;
    }
    return names;
}

}  // namespace

Dataset parse_mulan(const std::string& arff_text, const std::string& xml_text) {
    std::vector<std::string> label_list = parse_label_list_xml(xml_text);
    if (label_list.empty()) throw SchemaError("label list XML names no labels");

    struct RawAttr {
        Attribute attr;
        std::size_t line = 0;
    };
    std::vector<RawAttr> raw;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines;

    std::istringstream in(arff_text);
    std::string line_text;
    std::size_t line = 0;
    bool in_data = false;
    while (std::getline(in, line_text)) {
        ++line;
        if (!line_text.empty() && line_text.back() == '\r') line_text.pop_back();
        std::string_view sv = trim(line_text);
        if (sv.empty() || sv[0] == '%') continue;
        if (!in_data) {
            std::string keyword, rest;
            if (!arff_keyword(sv, keyword, rest))
                throw ParseError("expected @-declaration in header", line);
            if (keyword == "relation") continue;
            if (keyword == "data") {
                in_data = true;
                continue;
            }
            if (keyword != "attribute") throw ParseError("unknown declaration @" + keyword, line);
            std::size_t pos = 0;
            RawAttr ra;
            ra.line = line;
            ra.attr.name = read_token(rest, pos, line);
            if (ra.attr.name.empty()) throw ParseError("attribute without name", line);
            std::string_view type = trim(std::string_view(rest).substr(pos));
            if (type.empty()) throw ParseError("attribute without type", line);
            if (type.front() == '{') {
                if (type.back() != '}') throw ParseError("unterminated nominal value list", line);
                ra.attr.kind = Attribute::Kind::Nominal;
                ra.attr.values = split_nominal_values(type.substr(1, type.size() - 2), line);
            } else {
                std::string t = to_lower(type);
                if (t == "numeric" || t == "real" || t == "integer")
                    ra.attr.kind = Attribute::Kind::Numeric;
                else
                    throw ParseError("unsupported attribute type '" + std::string(type) + "'",
                                     line);
            }
            raw.push_back(std::move(ra));
        } else {
            if (sv.front() == '{') throw ParseError("sparse ARFF rows are not supported", line);
            rows.push_back(split_data_row(std::string(sv), line));
            row_lines.push_back(line);
        }
    }
    if (!in_data) throw ParseError("missing @data section", line == 0 ? 1 : line);
    if (raw.empty()) throw ParseError("missing @attribute declarations", 1);

    // Split declared attributes into features and labels by XML name.
    std::unordered_map<std::string, std::size_t> label_pos;
    for (std::size_t i = 0; i < label_list.size(); ++i) {
        if (!label_pos.emplace(label_list[i], i).second)
            throw SchemaError("duplicate label in XML: " + label_list[i]);
    }
    Dataset ds;
    ds.label_names = label_list;
    std::vector<int> column_role(raw.size(), -1);  // -1 feature, else label index
    std::vector<bool> label_seen(label_list.size(), false);
    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < raw.size(); ++c) {
        auto it = label_pos.find(raw[c].attr.name);
        if (it == label_pos.end()) {
            feature_cols.push_back(c);
            ds.schema.push_back(raw[c].attr);
            continue;
        }
        column_role[c] = static_cast<int>(it->second);
        label_seen[it->second] = true;
        const Attribute& a = raw[c].attr;
        if (a.kind == Attribute::Kind::Nominal) {
            for (const std::string& v : a.values)
                if (v != "0" && v != "1")
                    throw ValueError("label attribute '" + a.name + "' has non-binary value '" +
                                     v + "'");
        }
    }
    for (std::size_t i = 0; i < label_list.size(); ++i)
        if (!label_seen[i]) throw SchemaError("label '" + label_list[i] + "' not found in ARFF");

    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& fields = rows[r];
        std::size_t ln = row_lines[r];
        if (fields.size() != raw.size())
            throw ParseError("expected " + std::to_string(raw.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             ln);
        std::vector<double> x;
        x.reserve(feature_cols.size());
        LabelVector y(label_list.size(), 0);
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const std::string& cell = fields[c];
            if (trim(cell) == "?") throw ValueError("missing value at line " + std::to_string(ln));
            if (column_role[c] >= 0) {
                y[static_cast<std::size_t>(column_role[c])] = parse_label_cell(cell, ln);
                continue;
            }
            const Attribute& a = raw[c].attr;
            if (a.kind == Attribute::Kind::Nominal) {
                std::string v = std::string(trim(cell));
                auto it = std::find(a.values.begin(), a.values.end(), v);
                if (it == a.values.end())
                    throw ValueError("value '" + v + "' not in domain of " + a.name + " (line " +
                                     std::to_string(ln) + ")");
                x.push_back(static_cast<double>(it - a.values.begin()));
            } else {
                double v = 0;
                if (!parse_double(cell, v))
                    throw ParseError("invalid numeric value '" + std::string(trim(cell)) + "'",
                                     ln);
                x.push_back(v);
            }
        }
        ds.instances.push_back(std::move(x));
        ds.labels.push_back(std::move(y));
    }
    ds.validate();
    return ds;
}

Dataset load_mulan(const std::string& arff_path, const std::string& xml_path) {
    return parse_mulan(slurp(arff_path), slurp(xml_path));
}

// ---------------------------------------------------------------------------
// CSV

Dataset parse_csv_dataset(const std::string& text, std::size_t label_count) {
    std::vector<CsvRecord> records = read_csv_records(text);
    if (records.empty()) throw ParseError("empty CSV input", 1);
    const CsvRecord& header = records.front();
    std::size_t cols = header.fields.size();
    if (label_count == 0) throw ConfigError("label_count must be at least 1");
    if (label_count > cols)
        throw ConfigError("label_count " + std::to_string(label_count) + " exceeds column count " +
                          std::to_string(cols));
    std::size_t feature_count = cols - label_count;

    for (std::size_t r = 1; r < records.size(); ++r)
        if (records[r].fields.size() != cols)
            throw ParseError("expected " + std::to_string(cols) + " fields, got " +
                                 std::to_string(records[r].fields.size()),
                             records[r].line);

    Dataset ds;
    for (std::size_t c = feature_count; c < cols; ++c)
        ds.label_names.push_back(std::string(trim(header.fields[c])));

    // A feature column is numeric when every cell parses as a number.
    std::vector<bool> numeric(feature_count, true);
    for (std::size_t c = 0; c < feature_count; ++c) {
        for (std::size_t r = 1; r < records.size(); ++r) {
            double v;
            if (!parse_double(records[r].fields[c], v)) {
                numeric[c] = false;
                break;
            }
        }
    }
    for (std::size_t c = 0; c < feature_count; ++c) {
        Attribute a;
        a.name = std::string(trim(header.fields[c]));
        a.kind = numeric[c] ? Attribute::Kind::Numeric : Attribute::Kind::Nominal;
        ds.schema.push_back(std::move(a));
    }

    std::vector<std::unordered_map<std::string, std::size_t>> value_index(feature_count);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const CsvRecord& rec = records[r];
        std::vector<double> x;
        x.reserve(feature_count);
        for (std::size_t c = 0; c < feature_count; ++c) {
            if (numeric[c]) {
                double v = 0;
                parse_double(rec.fields[c], v);
                x.push_back(v);
            } else {
                const std::string& raw_value = rec.fields[c];
                auto [it, inserted] =
                    value_index[c].emplace(raw_value, ds.schema[c].values.size());
                if (inserted) ds.schema[c].values.push_back(raw_value);
                x.push_back(static_cast<double>(it->second));
            }
        }
        LabelVector y;
        y.reserve(label_count);
        for (std::size_t c = feature_count; c < cols; ++c)
            y.push_back(parse_label_cell(rec.fields[c], rec.line));
        ds.instances.push_back(std::move(x));
        ds.labels.push_back(std::move(y));
    }
    ds.validate();
    return ds;
}

Dataset load_csv(const std::string& path, std::size_t label_count) {
    return parse_csv_dataset(slurp(path), label_count);
}

std::string to_csv(const Dataset& data) {
    std::string out;
    bool first = true;
    for (const Attribute& a : data.schema) {
        if (!first) out += ',';
        out += csv_escape(a.name);
        first = false;
    }
    for (const std::string& name : data.label_names) {
        if (!first) out += ',';
        out += csv_escape(name);
        first = false;
    }
    out += '\n';
    for (std::size_t r = 0; r < data.instance_count(); ++r) {
        first = true;
        for (std::size_t a = 0; a < data.attribute_count(); ++a) {
            if (!first) out += ',';
            out += csv_escape(data.cell_text(r, a));
            first = false;
        }
        for (std::uint8_t y : data.labels[r]) {
            if (!first) out += ',';
            out += y ? '1' : '0';
            first = false;
        }
        out += '\n';
    }
    return out;
}

void write_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValueError("cannot open file for writing: " + path);
    out << to_csv(data);
}

// ---------------------------------------------------------------------------
// Folds and subsets

std::vector<std::vector<std::size_t>> stratified_folds(const Dataset& data, std::size_t k,
                                                       std::uint64_t seed) {
    std::size_t m = data.instance_count();
    if (k < 1) throw ConfigError("fold count must be positive");
    if (k > m) throw ConfigError("fold count exceeds instance count");

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::size_t> capacity(k, m / k);
    for (std::size_t f = 0; f < m % k; ++f) ++capacity[f];

    std::size_t n = data.label_count();
    std::vector<std::vector<std::size_t>> folds(k);
    std::vector<std::vector<std::size_t>> positives(k, std::vector<std::size_t>(n, 0));
    for (std::size_t j : order) {
        // Among folds with room, prefer the one holding fewest of this
        // instance's positive labels, then the smallest, then lowest index.
        std::size_t best = k;
        std::size_t best_overlap = 0, best_size = 0;
        for (std::size_t f = 0; f < k; ++f) {
            if (folds[f].size() >= capacity[f]) continue;
            std::size_t overlap = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (data.labels[j][i]) overlap += positives[f][i];
            if (best == k || overlap < best_overlap ||
                (overlap == best_overlap && folds[f].size() < best_size)) {
                best = f;
                best_overlap = overlap;
                best_size = folds[f].size();
            }
        }
        folds[best].push_back(j);
        for (std::size_t i = 0; i < n; ++i)
            if (data.labels[j][i]) ++positives[best][i];
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

Dataset subset(const Dataset& data, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.schema = data.schema;
    out.label_names = data.label_names;
    out.instances.reserve(rows.size());
    out.labels.reserve(rows.size());
    for (std::size_t r : rows) {
        out.instances.push_back(data.instances[r]);
        out.labels.push_back(data.labels[r]);
    }
    return out;
}

}  // namespace rulelift
