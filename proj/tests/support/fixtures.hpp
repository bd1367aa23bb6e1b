#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rulelift/dataset.hpp"
#include "rulelift/head_search.hpp"
#include "rulelift/metrics.hpp"

namespace rulelift::testing {

// Six instances, four labels, no features. Rows 0..2 are outside the body's
// coverage, rows 3..5 inside. Single-label heads under micro precision score
// 2/3, 2/3, 1/3, 0 on labels 0..3.
inline std::string toy_csv() {
    return "y1,y2,y3,y4\n"
           "0,1,1,0\n"
           "1,1,1,1\n"
           "0,0,1,0\n"
           "0,1,1,0\n"
           "1,1,0,0\n"
           "1,0,0,0\n";
}

inline Dataset toy_dataset() { return parse_csv_dataset(toy_csv(), 4); }

inline std::vector<std::size_t> toy_covered() { return {3, 4, 5}; }

// Uniform random dataset for property suites: label matrix plus a couple of
// numeric features nobody looks at during head search.
inline Dataset random_dataset(std::mt19937_64& rng, std::size_t m, std::size_t n,
                              double positive_rate = 0.5) {
    Dataset ds;
    for (std::size_t a = 0; a < 2; ++a) {
        Attribute attr;
        attr.name = "f" + std::to_string(a);
        attr.kind = Attribute::Kind::Numeric;
        ds.schema.push_back(attr);
    }
    for (std::size_t i = 0; i < n; ++i) ds.label_names.push_back("y" + std::to_string(i));
    std::uniform_real_distribution<double> value(0.0, 1.0);
    std::bernoulli_distribution bit(positive_rate);
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> row;
        for (std::size_t a = 0; a < 2; ++a) row.push_back(value(rng));
        LabelVector y(n, 0);
        for (std::size_t i = 0; i < n; ++i) y[i] = bit(rng) ? 1 : 0;
        ds.instances.push_back(std::move(row));
        ds.labels.push_back(std::move(y));
    }
    return ds;
}

// Random body coverage: a non-empty subset of instances.
inline std::vector<std::size_t> random_covered(std::mt19937_64& rng, std::size_t m) {
    std::vector<std::size_t> out;
    std::bernoulli_distribution pick(0.5);
    for (std::size_t j = 0; j < m; ++j)
        if (pick(rng)) out.push_back(j);
    if (out.empty()) out.push_back(rng() % m);
    return out;
}

// Random prior coverage marks, leaving at least one open pair.
inline CoverageState random_coverage(std::mt19937_64& rng, std::size_t m, std::size_t n,
                                     double rate) {
    CoverageState cov(m, n);
    std::bernoulli_distribution mark(rate);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (mark(rng)) cov.mark(j, i);
    if (cov.covered_pairs() == m * n) {
        // CoverageState cannot unmark; rebuild with one guaranteed open pair.
        CoverageState fresh(m, n);
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < n; ++i)
                if (!(j == 0 && i == 0) && cov.covered(j, i)) fresh.mark(j, i);
        return fresh;
    }
    return cov;
}

inline LiftFunction random_lift(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    switch (rng() % 4) {
        case 0:
            return LiftFunction::identity();
        case 1:
            return LiftFunction::kln(unit(rng) * 0.6);
        case 2: {
            std::size_t m = 1 + rng() % n;
            return LiftFunction::peak(m, 1.0 + unit(rng) * 0.5, 0.5 + unit(rng) * 2.0);
        }
        default: {
            std::vector<double> t{1.0};
            double v = 1.0;
            for (std::size_t x = 2; x <= n; ++x) {
                v += unit(rng) * 0.2 - 0.05;  // mostly rising, sometimes dipping
                t.push_back(std::max(0.1, v));
            }
            return LiftFunction::from_table(std::move(t));
        }
    }
}

inline HeuristicSpec random_macro_spec(std::mt19937_64& rng) {
    HeuristicSpec spec;
    spec.averaging = Averaging::Macro;
    switch (rng() % 4) {
        case 0:
            spec.measure = Measure::Precision;
            break;
        case 1:
            spec.measure = Measure::HammingAccuracy;
            break;
        case 2:
            spec.measure = Measure::FMeasure;
            spec.beta = 0.5;
            break;
        default:
            spec.measure = Measure::FMeasure;
            spec.beta = 1.0;
            break;
    }
    return spec;
}

}  // namespace rulelift::testing
