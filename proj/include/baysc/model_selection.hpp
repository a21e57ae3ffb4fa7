#pragma once
// mDIC and the (lambda, delta) grid search.

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "baysc/gibbs_engine.hpp"
#include "baysc/posterior_summary.hpp"

namespace baysc {

struct MdicResult {
    double mdic = 0.0;
    double mean_deviance = 0.0;
    double p_d = 0.0;
    bool negative_p_d = false;
};

// mDIC = Dbar + log(n(n+1)/2) * p_D with p_D = Dbar - D(point sample).
MdicResult mdic(std::span<const ChainSample> samples, std::size_t point_index, std::size_t n);

inline double mdic_penalty_multiplier(std::size_t n) {
    const double nd = static_cast<double>(n);
    return std::log(nd * (nd + 1.0) / 2.0);
}

struct GridPoint {
    double lambda = 0.0;
    double delta = 1.0;
};

struct GridSpec {
    std::vector<GridPoint> points;  // grid order: delta-major, lambda ascending

    // Every (lambda, delta) combination; inserts lambda = 0 if missing.
    static GridSpec cartesian(std::vector<double> lambdas, std::vector<double> deltas, bool* inserted_zero = nullptr);
    std::vector<double> deltas() const;
};

inline constexpr double kLambdaSafetyFactor = 0.8;

// Per delta: lambda_max = 0.8 * k / avg_degree, and lambda values
// {0} U {lambda_max * j / (n_lambda - 1), j = 1..n_lambda-1}. An empty graph
// only gets lambda = 0.
GridSpec build_grid(int k_estimate, const std::map<double, NeighborhoodGraph>& graph_per_delta, int n_lambda);

struct GridResult {
    double lambda = 0.0;
    double delta = 0.0;
    double mdic = 0.0;
    double mean_deviance = 0.0;
    double p_d = 0.0;
    bool negative_p_d = false;
    int k_hat = 0;
    PosteriorSummary summary;
    double runtime_seconds = 0.0;
    bool ok = false;
    std::string error;
};

struct GridOptions {
    int jobs = 1;
    // Every grid point shares the base seed, so chains differ only through
    // (lambda, delta). Otherwise each point gets a seed derived from its index.
    bool common_random_numbers = true;
    // Keep the n x n co-membership matrix for non-optimal points.
    bool keep_all_comembership = false;
};

struct GridSearchResult {
    std::size_t best_index = 0;
    std::vector<GridResult> all;

    const GridResult& best() const { return all.at(best_index); }
};

// Run the full pipeline at one grid point.
GridResult fit_grid_point(const std::vector<SimilarityMatrix>& similarities, const Coordinates& coords,
                          const GridPoint& point, const FitConfig& base);

// Minimizes mDIC over the grid; ties go to smaller lambda, then smaller delta.
GridSearchResult grid_search(const std::vector<SimilarityMatrix>& similarities, const Coordinates& coords,
                             const GridSpec& grid, const FitConfig& base, const GridOptions& options = {});

// Index of the best successful result, same tie rule. Throws if none succeeded.
std::size_t select_best(std::span<const GridResult> results);

}  // namespace baysc
