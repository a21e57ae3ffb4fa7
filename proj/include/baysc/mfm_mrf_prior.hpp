#pragma once
// Partition prior: mixture-of-finite-mixtures urn coefficients and the Potts
// style spatial reward.

#include <span>
#include <vector>

#include "baysc/similarity_graph.hpp"

namespace baysc {

// log V_n(t) for t = 1..t_max, with a zero-truncated Poisson(1) prior on
// the number of components and a symmetric Dirichlet(gamma) on weights:
//
//   V_n(t) = sum_{k >= t} k! / (k - t)! / [(gamma k)(gamma k + 1)...(gamma k + n - 1)] * p(k)
//
// Tables are extended on demand, never clamped.
class MfmPrior {
public:
    MfmPrior(int n, double gamma, int t_max = -1);

    int n() const { return n_; }
    double gamma() const { return gamma_; }
    int t_max() const { return static_cast<int>(log_vn_.size()); }

    // t in [1, n]; extends the table when t exceeds the tabulated range.
    double log_vn(int t) const;
    const std::vector<double>& table() const { return log_vn_; }

    // Upper truncation index used for the series at a given t.
    int series_cap(int t) const;

private:
    void extend_to(int t_max) const;

    int n_;
    double gamma_;
    mutable std::vector<double> log_vn_;
};

// Single series evaluation of log V_n(t); exposed for tests.
double log_vn_series(int n, double gamma, int t, int* k_cap = nullptr, double rel_tol = 1e-12);

// log p(k) for the zero-truncated Poisson(1).
double log_truncated_poisson1(int k);

double urn_log_weight_existing(int n_c_minus_i, double gamma);

// log gamma + log V_n(K*+1) - log V_n(K*).
double urn_log_weight_new(int k_star, const MfmPrior& mfm);

// lambda * |{j in neighbors(i) : z_j = c}|; pass c < 0 for a new domain (0).
double mrf_log_reward(std::span<const int> labels, const NeighborhoodGraph& graph, int i, int c, double lambda);

// k / average degree; +infinity on an empty graph.
double lambda_critical(int k, const NeighborhoodGraph& graph);

}  // namespace baysc
