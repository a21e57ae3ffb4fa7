#pragma once
// Model inputs: Fisher-Z similarity matrices and the binary spatial
// neighborhood graph.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "baysc/feature_pipeline.hpp"

namespace baysc {

inline constexpr double kSimilarityClip = 0.9999;

struct SimilarityMatrix {
    Eigen::MatrixXd values;  // symmetric n x n, diagonal retained
    int modality_id = 0;

    Eigen::Index n() const { return values.rows(); }
};

struct Coordinates {
    Eigen::MatrixX2d positions;  // n x 2

    Eigen::Index n() const { return positions.rows(); }
};

class NeighborhoodGraph {
public:
    NeighborhoodGraph() = default;
    NeighborhoodGraph(std::size_t n, double delta);

    std::size_t n() const { return neighbors_.size(); }
    double delta() const { return delta_; }
    double avg_degree() const;
    std::size_t edge_count() const;  // unordered pairs

    bool adjacent(std::size_t i, std::size_t j) const { return adjacency_[i * n() + j] != 0; }
    const std::vector<std::uint32_t>& neighbors(std::size_t i) const { return neighbors_[i]; }

    void add_edge(std::size_t i, std::size_t j);

private:
    double delta_ = 0.0;
    std::vector<std::uint8_t> adjacency_;
    std::vector<std::vector<std::uint32_t>> neighbors_;
};

// R = E E^T / d, diagonal included.
Eigen::MatrixXd cosine_similarity(const Embedding& emb);

// A = arctanh(clip(R, -0.9999, 0.9999)). Throws NumericError on non-finite input.
SimilarityMatrix fisher_z(const Eigen::MatrixXd& r, int modality_id = 0);

// Embedding -> standardized -> cosine -> Fisher-Z.
SimilarityMatrix similarity_from_embedding(const Embedding& emb, int modality_id = 0);

// W_ij = 1 iff i != j and ||s_i - s_j|| <= delta.
NeighborhoodGraph build_neighborhood(const Coordinates& coords, double delta);

}  // namespace baysc
