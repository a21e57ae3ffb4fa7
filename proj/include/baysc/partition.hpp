#pragma once

#include <span>
#include <vector>

namespace baysc {

// Domain assignment with 0-based contiguous labels; every domain in [0, k)
// is non-empty. Files and reports use 1-based domain numbers.
struct Partition {
    std::vector<int> labels;
    std::vector<int> occupancy;

    int k() const { return static_cast<int>(occupancy.size()); }
    std::size_t n() const { return labels.size(); }

    // Arbitrary integer labels, renumbered by order of first appearance.
    static Partition from_labels(std::span<const int> raw);

    // Throws std::logic_error when an invariant is broken.
    void validate() const;
};

// Relabels in place by order of first appearance; returns old -> new map.
std::vector<int> canonicalize_labels(std::vector<int>& labels);

}  // namespace baysc
