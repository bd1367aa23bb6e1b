#include "rulelift/head.hpp"

#include <algorithm>

#include "rulelift/error.hpp"

namespace rulelift {

void Head::add(const LabelAssignment& a) {
    auto it = std::lower_bound(assignments.begin(), assignments.end(), a,
                               [](const LabelAssignment& x, const LabelAssignment& y) {
                                   return x.label < y.label;
                               });
    if (it != assignments.end() && it->label == a.label)
        throw ConfigError("head already assigns label " + std::to_string(a.label));
    assignments.insert(it, a);
}

}  // namespace rulelift
