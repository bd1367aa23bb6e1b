#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rulelift/error.hpp"

namespace rulelift {

struct Attribute {
    enum class Kind { Nominal, Numeric };

    std::string name;
    Kind kind = Kind::Numeric;
    std::vector<std::string> values;  // nominal only, duplicate-free, declaration order

    bool operator==(const Attribute&) const = default;
};

// Dense 0/1 relevance vector, one entry per label.
using LabelVector = std::vector<std::uint8_t>;

class Dataset {
public:
    std::vector<Attribute> schema;
    std::vector<std::string> label_names;
    // Cells: numeric attributes hold the value, nominal attributes hold the
    // index into Attribute::values.
    std::vector<std::vector<double>> instances;
    std::vector<LabelVector> labels;

    std::size_t instance_count() const { return instances.size(); }
    std::size_t attribute_count() const { return schema.size(); }
    std::size_t label_count() const { return label_names.size(); }

    // Stable digest of attribute names/kinds/value lists and label names.
    std::uint64_t schema_fingerprint() const;

    // Rendering of one cell as it would appear in CSV output.
    std::string cell_text(std::size_t row, std::size_t attr) const;

    void validate() const;  // throws SchemaError/ValueError on broken invariants
};

// Tracks which (instance, label) pairs are already covered by earlier rules.
class CoverageState {
public:
    CoverageState(std::size_t instance_count, std::size_t label_count);

    bool covered(std::size_t instance, std::size_t label) const {
        return flags_[instance * label_count_ + label] != 0;
    }
    // Returns true if the pair was previously uncovered.
    bool mark(std::size_t instance, std::size_t label);

    std::size_t covered_pairs() const { return covered_pairs_; }
    std::size_t instance_count() const { return instance_count_; }
    std::size_t label_count() const { return label_count_; }
    // Number of labels still uncovered for one instance.
    std::size_t open_labels(std::size_t instance) const { return open_[instance]; }

private:
    std::size_t instance_count_ = 0;
    std::size_t label_count_ = 0;
    std::size_t covered_pairs_ = 0;
    std::vector<std::uint8_t> flags_;
    std::vector<std::size_t> open_;
};

std::size_t uncovered_pairs(const Dataset& data, const CoverageState& cov);

// Loads the ARFF + label-list XML pair; labels may sit anywhere in the ARFF.
Dataset load_mulan(const std::string& arff_path, const std::string& xml_path);
Dataset parse_mulan(const std::string& arff_text, const std::string& xml_text);

// Header row required; the last label_count columns are binary labels.
// Feature columns are numeric when every cell parses as a number, else nominal.
Dataset load_csv(const std::string& path, std::size_t label_count);
Dataset parse_csv_dataset(const std::string& text, std::size_t label_count);

std::string to_csv(const Dataset& data);
void write_csv(const Dataset& data, const std::string& path);

// Deterministic label-aware partition; fold sizes differ by at most one.
std::vector<std::vector<std::size_t>> stratified_folds(const Dataset& data, std::size_t k,
                                                       std::uint64_t seed);

// Dataset restricted to the given rows (schema shared).
Dataset subset(const Dataset& data, const std::vector<std::size_t>& rows);

}  // namespace rulelift
