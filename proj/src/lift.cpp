#include "rulelift/lift.hpp"

#include <cmath>

#include "rulelift/error.hpp"
#include "rulelift/strings.hpp"

namespace rulelift {

LiftFunction LiftFunction::identity() { return LiftFunction{}; }

LiftFunction LiftFunction::kln(double k) {
    if (k < 0) throw ConfigError("kln lift needs k >= 0");
    LiftFunction f;
    f.variant = Variant::Kln;
    f.k = k;
    return f;
}

LiftFunction LiftFunction::peak(std::size_t m, double l_max, double curvature) {
    if (m < 1) throw ConfigError("peak lift needs m >= 1");
    if (l_max < 1) throw ConfigError("peak lift needs lmax >= 1");
    if (curvature <= 0) throw ConfigError("peak lift needs c > 0");
    LiftFunction f;
    f.variant = Variant::Peak;
    f.peak_m = m;
    f.l_max = l_max;
    f.curvature = curvature;
    return f;
}

LiftFunction LiftFunction::from_table(std::vector<double> values) {
    if (values.empty()) throw ConfigError("table lift needs at least one value");
    if (values.front() != 1.0) throw ConfigError("table lift must start at 1");
    for (double v : values)
        if (v < 0) throw ConfigError("table lift values must be non-negative");
    LiftFunction f;
    f.variant = Variant::Table;
    f.table = std::move(values);
    return f;
}

namespace {

// 1 + ((x - b) / (a - b))^(1/c) * (l_max - 1)
double peak_branch(double x, double a, double b, double l_max, double c) {
    double base = (x - b) / (a - b);
    return 1.0 + std::pow(base, 1.0 / c) * (l_max - 1.0);
}

}  // namespace

double lift_at(const LiftFunction& f, std::size_t x, std::size_t n) {
    if (n < 1) throw ConfigError("label count must be at least 1");
    if (x < 1 || x > n)
        throw ConfigError("head size " + std::to_string(x) + " outside [1, " + std::to_string(n) +
                          "]");
    switch (f.variant) {
        case LiftFunction::Variant::Identity:
            return 1.0;
        case LiftFunction::Variant::Kln:
            return 1.0 + f.k * std::log(static_cast<double>(x));
        case LiftFunction::Variant::Peak: {
            if (f.peak_m > n) throw ConfigError("peak lift position exceeds label count");
            if (x == 1) return 1.0;
            auto m = static_cast<double>(f.peak_m);
            auto xd = static_cast<double>(x);
            if (x <= f.peak_m) return peak_branch(xd, m, 1.0, f.l_max, f.curvature);
            return peak_branch(xd, m, static_cast<double>(n), f.l_max, f.curvature);
        }
        case LiftFunction::Variant::Table:
            if (f.table.size() < n) throw ConfigError("table lift shorter than label count");
            return f.table[x - 1];
    }
    throw ConfigError("unknown lift variant");
}

double lifted_value(const LiftFunction& f, double h, std::size_t head_size, std::size_t n) {
    return h * lift_at(f, head_size, n);
}

double max_remaining_lift(const LiftFunction& f, std::size_t k, std::size_t n) {
    if (k < 1 || k > n) throw ConfigError("current size outside [1, n]");
    if (k == n) return 0.0;
    switch (f.variant) {
        case LiftFunction::Variant::Identity:
            return 1.0;
        case LiftFunction::Variant::Kln:
            return lift_at(f, n, n);  // non-decreasing in x
        case LiftFunction::Variant::Peak:
            if (f.peak_m > n) throw ConfigError("peak lift position exceeds label count");
            if (k < f.peak_m) return f.l_max;
            return lift_at(f, k + 1, n);  // non-increasing beyond the peak
        case LiftFunction::Variant::Table: {
            if (f.table.size() < n) throw ConfigError("table lift shorter than label count");
            double best = 0.0;
            for (std::size_t x = k + 1; x <= n; ++x) best = std::max(best, f.table[x - 1]);
            return best;
        }
    }
    throw ConfigError("unknown lift variant");
}

namespace {

double parse_param(std::string_view text, const std::string& what) {
    double v = 0;
    if (!parse_double(text, v)) throw ConfigError("invalid " + what + " in lift spec");
    return v;
}

}  // namespace

LiftFunction parse_lift(const std::string& text) {
    std::string_view sv = trim(text);
    std::string lower = to_lower(sv);
    if (lower == "none" || lower == "identity") return LiftFunction::identity();

    std::size_t colon = sv.find(':');
    if (colon == std::string_view::npos)
        throw ConfigError("unknown lift spec '" + std::string(sv) + "'");
    std::string kind = to_lower(trim(sv.substr(0, colon)));
    std::string_view args = trim(sv.substr(colon + 1));

    if (kind == "table") {
        std::vector<double> values;
        std::size_t pos = 0;
        while (pos <= args.size()) {
            std::size_t comma = args.find(',', pos);
            std::string_view item =
                comma == std::string_view::npos ? args.substr(pos) : args.substr(pos, comma - pos);
            values.push_back(parse_param(item, "table value"));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        return LiftFunction::from_table(std::move(values));
    }

    // key=value pairs separated by commas
    std::vector<std::pair<std::string, double>> params;
    std::size_t pos = 0;
    while (pos <= args.size() && !args.empty()) {
        std::size_t comma = args.find(',', pos);
        std::string_view item =
            comma == std::string_view::npos ? args.substr(pos) : args.substr(pos, comma - pos);
        std::size_t eq = item.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected key=value in lift spec");
        params.emplace_back(to_lower(trim(item.substr(0, eq))),
                            parse_param(item.substr(eq + 1), "parameter value"));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    auto get = [&](const std::string& key, double fallback, bool required) {
        for (auto& [k, v] : params)
            if (k == key) return v;
        if (required) throw ConfigError("lift spec missing parameter '" + key + "'");
        return fallback;
    };

    if (kind == "kln") return LiftFunction::kln(get("k", 0.0, true));
    if (kind == "peak") {
        double m = get("m", 0.0, true);
        if (m < 1 || m != std::floor(m)) throw ConfigError("peak lift needs integer m >= 1");
        return LiftFunction::peak(static_cast<std::size_t>(m), get("lmax", 1.0, true),
                                  get("c", 1.0, true));
    }
    throw ConfigError("unknown lift kind '" + kind + "'");
}

std::string format_lift(const LiftFunction& f) {
    switch (f.variant) {
        case LiftFunction::Variant::Identity:
            return "none";
        case LiftFunction::Variant::Kln:
            return "kln:k=" + format_double(f.k);
        case LiftFunction::Variant::Peak:
            return "peak:m=" + std::to_string(f.peak_m) + ",lmax=" + format_double(f.l_max) +
                   ",c=" + format_double(f.curvature);
        case LiftFunction::Variant::Table: {
            std::string out = "table:";
            for (std::size_t i = 0; i < f.table.size(); ++i) {
                if (i) out += ',';
                out += format_double(f.table[i]);
            }
            return out;
        }
    }
    throw ConfigError("unknown lift variant");
}

}  // namespace rulelift
