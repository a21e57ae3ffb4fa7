#pragma once
// Label-switching-free summaries of a chain: posterior co-membership,
// Dahl's representative sample and per-cell uncertainty.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "baysc/gibbs_engine.hpp"
#include "baysc/partition.hpp"

namespace baysc {

// B_ij = 1 iff z_i == z_j.
Eigen::MatrixXd comembership(std::span<const int> labels);

// Running co-membership counts; mean() is the posterior mean matrix.
class ComembershipAccumulator {
public:
    explicit ComembershipAccumulator(std::size_t n) : n_(n), counts_(n * n, 0) {}

    void add(std::span<const int> labels);
    std::size_t n() const { return n_; }
    std::uint32_t samples() const { return m_; }
    std::uint32_t count(std::size_t i, std::size_t j) const { return counts_[i * n_ + j]; }
    Eigen::MatrixXd mean() const;

    // M^2 * sum_ij (B_ij - Bbar_ij)^2 in exact integer arithmetic.
    std::int64_t scaled_loss(std::span<const int> labels) const;

private:
    std::size_t n_;
    std::uint32_t m_ = 0;
    std::vector<std::uint32_t> counts_;
};

struct DahlResult {
    std::size_t index = 0;  // 0-based position of t* in the sample list
    Eigen::MatrixXd mean_comembership;
};

// argmin_t ||B^(t) - Bbar||_F^2, ties to the smallest t.
DahlResult dahl_select(std::span<const std::vector<int>> label_samples);
DahlResult dahl_select(std::span<const ChainSample> samples);

struct UncertaintyScores {
    std::vector<double> uncertainty;        // 1 - max_c affinity(i, c)
    std::vector<double> assigned_affinity;  // affinity to the cell's own domain
    std::vector<bool> singleton;            // own domain has no other members
};

// Affinity(i, c) = mean of Bbar_ij over j in domain c, j != i (0 for an
// empty set).
UncertaintyScores uncertainty_scores(const Eigen::MatrixXd& mean_comembership, const Partition& point);

struct PosteriorSummary {
    Eigen::MatrixXd mean_comembership;
    std::size_t dahl_index = 0;
    Partition point_partition;
    UncertaintyScores scores;
    int k_hat = 0;
    std::size_t n_samples = 0;
};

PosteriorSummary summarize(std::span<const ChainSample> samples);

}  // namespace baysc
