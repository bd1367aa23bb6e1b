#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace rulelift {

// One predicted label value, e.g. "label 3 = present".
struct LabelAssignment {
    std::size_t label = 0;
    bool present = true;

    bool operator==(const LabelAssignment&) const = default;
    // Order: by label, present before absent.
    bool operator<(const LabelAssignment& o) const {
        if (label != o.label) return label < o.label;
        return present && !o.present;
    }
};

// Multi-label rule head: at most one assignment per label, sorted by label.
struct Head {
    std::vector<LabelAssignment> assignments;

    std::size_t size() const { return assignments.size(); }
    bool empty() const { return assignments.empty(); }

    std::optional<bool> value_for(std::size_t label) const {
        for (const LabelAssignment& a : assignments)
            if (a.label == label) return a.present;
        return std::nullopt;
    }

    // Keeps assignments sorted; rejects a second value for the same label.
    void add(const LabelAssignment& a);

    bool operator==(const Head&) const = default;
};

}  // namespace rulelift
