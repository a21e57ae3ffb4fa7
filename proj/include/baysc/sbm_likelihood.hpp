#pragma once
// Gaussian stochastic block model over similarity entries with a
// Normal-Gamma prior on each block's (mean, precision).

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "baysc/rng.hpp"
#include "baysc/similarity_graph.hpp"

namespace baysc {

inline constexpr double kHalfLog2Pi = 0.91893853320467274178;

struct NormalGammaPrior {
    double mu0_diag = 0.0;     // location for within-domain blocks (r == s)
    double mu0_offdiag = 0.0;  // location for between-domain blocks
    double k0 = 10.0;
    double alpha = 1.0;
    double beta = 1.0;

    double mu0(bool within) const { return within ? mu0_diag : mu0_offdiag; }
    void validate() const;
};

struct NormalGammaPosterior {
    double k_n;
    double mu_n;
    double alpha_n;
    double beta_n;
};

struct BlockStat {
    double count = 0.0;
    double mean = 0.0;
    double sse = 0.0;
};

// Symmetric K x K table of block sufficient statistics.
class BlockStats {
public:
    BlockStats() = default;
    explicit BlockStats(int k) : k_(k), stats_(static_cast<std::size_t>(k * k)) {}

    int k() const { return k_; }
    const BlockStat& at(int r, int s) const { return stats_[static_cast<std::size_t>(r * k_ + s)]; }
    BlockStat& at(int r, int s) { return stats_[static_cast<std::size_t>(r * k_ + s)]; }

private:
    int k_ = 0;
    std::vector<BlockStat> stats_;
};

// Per-modality block parameters; both matrices symmetric K x K.
struct BlockParams {
    Eigen::MatrixXd means;
    Eigen::MatrixXd precisions;

    int k() const { return static_cast<int>(means.rows()); }
};

// mu0_diag = mean of diag(A), mu0_offdiag = mean of strict upper triangle.
NormalGammaPrior empirical_prior(const SimilarityMatrix& a, double k0 = 10.0, double alpha = 1.0,
                                 double beta = 1.0);

// Labels are 0-based and contiguous in [0, k). Off-diagonal pairs i < j are
// pooled per unordered block; the diagonal is excluded unless requested.
BlockStats block_stats(const SimilarityMatrix& a, std::span<const int> labels, int k,
                       bool include_diagonal = false);

NormalGammaPosterior posterior_hyperparams(const BlockStat& stat, const NormalGammaPrior& prior, bool within);

// tau ~ Gamma(alpha_n, beta_n) (shape-rate), mu | tau ~ N(mu_n, 1 / (k_n tau)).
// Blocks are drawn in (r, s), r <= s row-major order.
BlockParams resample_block_params(const BlockStats& stats, const NormalGammaPrior& prior, Rng& rng);

// Single (mu, tau) draw from the prior for one block.
std::pair<double, double> draw_block_from_prior(const NormalGammaPrior& prior, bool within, Rng& rng);

// Sum over j != i of 1/2 log tau_{c,z_j} - tau_{c,z_j}/2 (A_ij - mu_{c,z_j})^2.
// With `normalized` the -1/2 log(2 pi) constant is added per term.
double cell_conditional_loglik(const SimilarityMatrix& a, std::span<const int> labels, const BlockParams& params,
                               int i, int c, bool normalized = false);

// log marginal likelihood of the single observation A_ii under the
// within-domain prior.
double new_domain_marginal(double a_ii, const NormalGammaPrior& prior, bool normalized = false);

// -2 sum_m w_m sum_{i<=j} log N(A_ij; mu_{z_i z_j}, 1/tau_{z_i z_j}), diagonal
// included and evaluated under the within-block parameters. Modalities with
// zero weight are skipped.
double full_deviance(std::span<const SimilarityMatrix> a_all, std::span<const double> weights,
                     std::span<const int> labels, std::span<const BlockParams> params);

}  // namespace baysc
