#pragma once
// Blocked Gibbs sampler over domain labels and block parameters.
//
// Each sweep visits every cell, removes it from its domain, scores the K*
// remaining domains and one fresh domain, and samples a label. Block
// parameters are then redrawn from their conjugate posteriors. Randomness for
// sweep t comes from streams derived from (seed, t), so two chains that reach
// the same partition at the same iteration continue identically.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "baysc/mfm_mrf_prior.hpp"
#include "baysc/partition.hpp"
#include "baysc/rng.hpp"
#include "baysc/sbm_likelihood.hpp"
#include "baysc/similarity_graph.hpp"

namespace baysc {

enum class InitMethod { uniform, kmeans };
InitMethod parse_init_method(const std::string& name);
std::string to_string(InitMethod m);

struct FitConfig {
    double lambda = 0.0;
    double delta = 1.0;
    double gamma = 1.0;
    std::vector<double> weights;  // per modality; empty means 1 for every modality
    int n_iterations = 1000;
    int n_burnin = 500;
    int thin = 1;
    std::uint64_t seed = 1;
    int init_k = 5;
    // kmeans: Lloyd's algorithm on the (weighted) similarity rows; uniform:
    // labels drawn uniformly over init_k.
    InitMethod init_method = InitMethod::kmeans;

    // Normal-Gamma hyperparameters (mu0 is set empirically per modality).
    double k0 = 10.0;
    double alpha = 1.0;
    double beta = 1.0;

    // Add the -1/2 log(2 pi) constant to every observation in label scores.
    bool normalized_likelihood = false;
    // Pool A_ii into within-domain block statistics.
    bool include_diagonal_in_blocks = false;
    // Visit cells in a random order each sweep instead of index order.
    bool random_scan = false;
    // Draw the initial block parameters from their conditional posterior
    // given the initial labels instead of from the prior.
    bool init_params_from_posterior = true;

    // `require_positive_weight` is relaxed only for prior-only diagnostics.
    void validate(std::size_t n_modalities, bool require_positive_weight = true) const;
    std::vector<double> resolved_weights(std::size_t n_modalities) const;
};

namespace detail {
// k-means++ seeding then Lloyd iterations on the rows of x. Returns labels in
// [0, k), canonicalized by first appearance; empty clusters are dropped.
std::vector<int> kmeans_rows(const Eigen::MatrixXd& x, int k, Rng& rng, int max_iter = 100);
}  // namespace detail

// Everything a chain reads; shared read-only between chains.
struct ModelInputs {
    std::vector<SimilarityMatrix> similarities;
    NeighborhoodGraph graph;
    std::vector<NormalGammaPrior> priors;

    std::size_t n() const { return graph.n(); }
    std::size_t n_modalities() const { return similarities.size(); }

    static ModelInputs make(std::vector<SimilarityMatrix> similarities, NeighborhoodGraph graph,
                            double k0 = 10.0, double alpha = 1.0, double beta = 1.0);
};

struct ChainState {
    Partition partition;
    std::vector<BlockParams> params;  // one per modality
};

struct ChainSample {
    int iteration = 0;
    std::vector<int> labels;
    int k = 0;
    std::vector<BlockParams> params;
    double deviance = 0.0;
};

// Per-candidate score breakdown for one cell; the last entry is the new domain.
struct LabelScores {
    std::vector<double> likelihood;
    std::vector<double> spatial;
    std::vector<double> urn;

    std::size_t size() const { return urn.size(); }
    double total(std::size_t c) const { return likelihood[c] + spatial[c] + urn[c]; }
    std::vector<double> probabilities() const;
};

class GibbsSampler {
public:
    GibbsSampler(const ModelInputs& inputs, FitConfig config, bool require_positive_weight = true);

    const FitConfig& config() const { return config_; }
    const MfmPrior& mfm() const { return mfm_; }
    const std::vector<double>& weights() const { return weights_; }

    ChainState init_chain() const;

    // Takes cell i out of its domain, purging the domain if it empties.
    // Afterwards labels[i] == -1.
    void remove_cell(ChainState& state, int i) const;

    // Scores for an already-removed cell.
    LabelScores score_cell(const ChainState& state, int i) const;

    // Assigns a removed cell to candidate c (c == k() opens a new domain
    // whose block parameters are drawn from the prior).
    void assign_cell(ChainState& state, int i, int c, Rng& rng) const;

    // remove -> score -> sample -> assign. Returns the chosen label.
    int label_update(ChainState& state, int i, Rng& rng) const;

    // One full iteration; returns the deviance of the resulting state.
    double sweep(ChainState& state, int iteration) const;

    double deviance(const ChainState& state) const;

    // n_iterations sweeps, keeping every thin-th post-burn-in state.
    // Optional trace: "iteration K deviance labels..." per iteration.
    std::vector<ChainSample> run(std::ostream* trace = nullptr) const;

    // Resample every modality's block parameters given the current partition.
    void resample_params(ChainState& state, Rng& rng) const;

private:
    const ModelInputs& inputs_;
    FitConfig config_;
    std::vector<double> weights_;
    MfmPrior mfm_;
};

// Convenience wrapper: construct a sampler and run it.
std::vector<ChainSample> run_chain(const ModelInputs& inputs, const FitConfig& config, std::ostream* trace = nullptr);

}  // namespace baysc
