#include "baysc/partition.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace baysc {

Partition Partition::from_labels(std::span<const int> raw) {
    Partition p;
    p.labels.reserve(raw.size());
    std::unordered_map<int, int> remap;
    for (int v : raw) {
        auto [it, inserted] = remap.try_emplace(v, static_cast<int>(remap.size()));
        if (inserted) p.occupancy.push_back(0);
        p.labels.push_back(it->second);
        ++p.occupancy[static_cast<std::size_t>(it->second)];
    }
    return p;
}

void Partition::validate() const {
    std::vector<int> counts(occupancy.size(), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int z = labels[i];
        if (z < 0 || z >= k())
            throw std::logic_error("cell " + std::to_string(i) + " has label " + std::to_string(z) +
                                   " outside [0, " + std::to_string(k()) + ")");
        ++counts[static_cast<std::size_t>(z)];
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) throw std::logic_error("domain " + std::to_string(c) + " is empty");
        if (counts[c] != occupancy[c]) throw std::logic_error("occupancy out of sync for domain " + std::to_string(c));
    }
}

std::vector<int> canonicalize_labels(std::vector<int>& labels) {
    int max_label = -1;
    for (int v : labels) max_label = std::max(max_label, v);
    std::vector<int> remap(static_cast<std::size_t>(max_label + 1), -1);
    int next = 0;
    for (int& v : labels) {
        auto& r = remap[static_cast<std::size_t>(v)];
        if (r < 0) r = next++;
        v = r;
    }
    return remap;
}

}  // namespace baysc
