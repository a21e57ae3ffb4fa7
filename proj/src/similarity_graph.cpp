#include "baysc/similarity_graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "baysc/errors.hpp"

namespace baysc {

NeighborhoodGraph::NeighborhoodGraph(std::size_t n, double delta)
    : delta_(delta), adjacency_(n * n, 0), neighbors_(n) {}

double NeighborhoodGraph::avg_degree() const {
    if (n() == 0) return 0.0;
    return 2.0 * static_cast<double>(edge_count()) / static_cast<double>(n());
}

std::size_t NeighborhoodGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& nb : neighbors_) total += nb.size();
    return total / 2;
}

void NeighborhoodGraph::add_edge(std::size_t i, std::size_t j) {
    if (i == j) throw std::invalid_argument("self-loops are not allowed in the neighborhood graph");
    if (adjacent(i, j)) return;
    adjacency_[i * n() + j] = 1;
    adjacency_[j * n() + i] = 1;
    neighbors_[i].push_back(static_cast<std::uint32_t>(j));
    neighbors_[j].push_back(static_cast<std::uint32_t>(i));
    std::sort(neighbors_[i].begin(), neighbors_[i].end());
    std::sort(neighbors_[j].begin(), neighbors_[j].end());
}

Eigen::MatrixXd cosine_similarity(const Embedding& emb) {
    const double d = static_cast<double>(emb.dim());
    Eigen::MatrixXd r = (emb.values * emb.values.transpose()) / d;
    // exact symmetry regardless of BLAS blocking
    for (Eigen::Index i = 0; i < r.rows(); ++i)
        for (Eigen::Index j = i + 1; j < r.cols(); ++j) r(j, i) = r(i, j);
    return r;
}

SimilarityMatrix fisher_z(const Eigen::MatrixXd& r, int modality_id) {
    if (r.rows() != r.cols()) throw std::invalid_argument("similarity matrix must be square");
    SimilarityMatrix out;
    out.modality_id = modality_id;
    out.values.resize(r.rows(), r.cols());
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        for (Eigen::Index j = 0; j < r.cols(); ++j) {
            const double v = r(i, j);
            if (!std::isfinite(v))
                throw NumericError("non-finite similarity at cell pair (" + std::to_string(i) + ", " +
                                   std::to_string(j) + ")");
            out.values(i, j) = std::atanh(std::clamp(v, -kSimilarityClip, kSimilarityClip));
        }
    }
    return out;
}

SimilarityMatrix similarity_from_embedding(const Embedding& emb, int modality_id) {
    return fisher_z(cosine_similarity(standardize_cells(emb)), modality_id);
}

NeighborhoodGraph build_neighborhood(const Coordinates& coords, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("neighborhood threshold delta must be positive");
    const auto n = static_cast<std::size_t>(coords.n());
    NeighborhoodGraph g(n, delta);
    const double d2 = delta * delta;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = coords.positions(i, 0) - coords.positions(j, 0);
            const double dy = coords.positions(i, 1) - coords.positions(j, 1);
            if (dx * dx + dy * dy <= d2) g.add_edge(i, j);
        }
    }
    return g;
}

}  // namespace baysc
