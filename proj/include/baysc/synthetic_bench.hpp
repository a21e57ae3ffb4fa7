#pragma once
// Synthetic similarity data drawn from the model's own generative
// assumptions, with known ground truth.

#include <cstdint>
#include <vector>

#include "baysc/partition.hpp"
#include "baysc/similarity_graph.hpp"

namespace baysc {

struct SyntheticSpec {
    int grid_side = 12;
    int k_true = 3;
    double mu_within = 0.8;
    double mu_between = 0.0;
    double precision = 4.0;
    std::uint64_t seed = 1;
    int n_modalities = 1;

    void validate() const;
};

struct SyntheticData {
    std::vector<SimilarityMatrix> similarities;
    Coordinates coords;
    Partition truth;
};

// Unit-spaced lattice, cell index = row * grid_side + col at (col, row).
// Truth: k_true contiguous vertical bands of columns. Off-diagonal entries
// are Normal(mu_within or mu_between, 1/precision), clipped to the Fisher-Z
// range; the diagonal is arctanh(0.9999).
SyntheticData generate_spatial_sbm(const SyntheticSpec& spec);

// Same similarities and truth, coordinates randomly permuted across cells.
SyntheticData generate_nonspatial_null(const SyntheticSpec& spec);

}  // namespace baysc
