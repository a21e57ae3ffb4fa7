#pragma once
// External agreement metrics and spatially aware clustering scores.

#include <span>
#include <vector>

#include "baysc/similarity_graph.hpp"

namespace baysc {

class ContingencyTable {
public:
    // Labels may be any integers; classes are numbered by first appearance.
    ContingencyTable(std::span<const int> truth, std::span<const int> pred);

    std::size_t n() const { return n_; }
    std::size_t rows() const { return row_sums_.size(); }
    std::size_t cols() const { return col_sums_.size(); }
    long long at(std::size_t r, std::size_t c) const { return counts_[r * cols() + c]; }
    const std::vector<long long>& row_sums() const { return row_sums_; }
    const std::vector<long long>& col_sums() const { return col_sums_; }

private:
    std::size_t n_ = 0;
    std::vector<long long> counts_;
    std::vector<long long> row_sums_;
    std::vector<long long> col_sums_;
};

double ari(std::span<const int> truth, std::span<const int> pred);

struct InformationScores {
    double nmi = 0.0;
    double ami = 0.0;
    double homogeneity = 0.0;
};

// Natural logs; NMI uses the geometric mean of entropies, AMI the
// arithmetic mean with the exact hypergeometric expected mutual information.
InformationScores nmi_ami_homogeneity(std::span<const int> truth, std::span<const int> pred);

// Exact E[I] under the permutation model for the given marginals.
double expected_mutual_information(const ContingencyTable& table);

enum class MoranReduction { occupancy_weighted, mean, max };

// Moran's I of each domain indicator, reduced to one number. Domains whose
// indicator has zero variance contribute 0. Throws on an empty graph.
double morans_i(std::span<const int> labels, const NeighborhoodGraph& graph,
                MoranReduction reduction = MoranReduction::occupancy_weighted);

struct SpatialWeightFn {
    enum class Kind { constant_one, linear_decay };
    Kind kind = Kind::constant_one;
    double d_max = 1.0;

    // Penalty share charged for a misclassified pair at distance d.
    double operator()(double d) const;
};

// Weighted-Rand index adjusted for chance: every disagreeing pair costs
// wfn(d_ij); the score is 1 - penalty / E[penalty] under random relabeling
// of pred with fixed cluster sizes. With constant_one weights this is
// exactly the adjusted Rand index.
double spari(std::span<const int> truth, std::span<const int> pred, const Coordinates& coords,
             const SpatialWeightFn& wfn);

}  // namespace baysc
