#include "baysc/model_selection.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

namespace baysc {

MdicResult mdic(std::span<const ChainSample> samples, std::size_t point_index, std::size_t n) {
    if (samples.empty()) throw std::invalid_argument("mdic needs at least one sample");
    if (point_index >= samples.size()) throw std::out_of_range("point sample index out of range");
    MdicResult r;
    double total = 0.0;
    for (const auto& s : samples) total += s.deviance;
    r.mean_deviance = samples.size() == 1 ? samples.front().deviance : total / static_cast<double>(samples.size());
    r.p_d = r.mean_deviance - samples[point_index].deviance;
    r.negative_p_d = r.p_d < 0.0;
    r.mdic = r.mean_deviance + mdic_penalty_multiplier(n) * r.p_d;
    return r;
}

GridSpec GridSpec::cartesian(std::vector<double> lambdas, std::vector<double> deltas, bool* inserted_zero) {
    if (deltas.empty()) throw std::invalid_argument("delta grid is empty");
    for (double l : lambdas)
        if (!(l >= 0.0)) throw std::invalid_argument("lambda grid values must be >= 0");
    for (double d : deltas)
        if (!(d > 0.0)) throw std::invalid_argument("delta grid values must be > 0");
    const bool has_zero = std::find(lambdas.begin(), lambdas.end(), 0.0) != lambdas.end();
    if (!has_zero) lambdas.push_back(0.0);
    if (inserted_zero) *inserted_zero = !has_zero;
    std::sort(lambdas.begin(), lambdas.end());
    lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
    std::sort(deltas.begin(), deltas.end());
    deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
    GridSpec g;
    for (double d : deltas)
        for (double l : lambdas) g.points.push_back({l, d});
    return g;
}

std::vector<double> GridSpec::deltas() const {
    std::set<double> s;
    for (const auto& p : points) s.insert(p.delta);
    return {s.begin(), s.end()};
}

GridSpec build_grid(int k_estimate, const std::map<double, NeighborhoodGraph>& graph_per_delta, int n_lambda) {
    if (k_estimate < 1) throw std::invalid_argument("k_estimate must be >= 1");
    if (n_lambda < 1) throw std::invalid_argument("n_lambda must be >= 1");
    GridSpec g;
    for (const auto& [delta, graph] : graph_per_delta) {
        g.points.push_back({0.0, delta});
        const double c = graph.avg_degree();
        if (c <= 0.0 || n_lambda < 2) continue;
        const double lambda_max = kLambdaSafetyFactor * static_cast<double>(k_estimate) / c;
        for (int j = 1; j < n_lambda; ++j)
            g.points.push_back({lambda_max * static_cast<double>(j) / static_cast<double>(n_lambda - 1), delta});
    }
    return g;
}

GridResult fit_grid_point(const std::vector<SimilarityMatrix>& similarities, const Coordinates& coords,
                          const GridPoint& point, const FitConfig& base) {
    const auto start = std::chrono::steady_clock::now();
    GridResult r;
    r.lambda = point.lambda;
    r.delta = point.delta;
    try {
        FitConfig cfg = base;
        cfg.lambda = point.lambda;
        cfg.delta = point.delta;
        const ModelInputs inputs =
            ModelInputs::make(similarities, build_neighborhood(coords, point.delta), cfg.k0, cfg.alpha, cfg.beta);
        const auto samples = run_chain(inputs, cfg);
        r.summary = summarize(samples);
        const MdicResult m = mdic(samples, r.summary.dahl_index, inputs.n());
        r.mdic = m.mdic;
        r.mean_deviance = m.mean_deviance;
        r.p_d = m.p_d;
        r.negative_p_d = m.negative_p_d;
        r.k_hat = r.summary.k_hat;
        r.ok = std::isfinite(r.mdic);
        if (!r.ok) r.error = "non-finite mDIC";
    } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
    }
    r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::size_t select_best(std::span<const GridResult> results) {
    std::size_t best = results.size();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        if (!r.ok) continue;
        if (best == results.size()) {
            best = i;
            continue;
        }
        const auto& b = results[best];
        const bool better = r.mdic < b.mdic ||
                            (r.mdic == b.mdic && (r.lambda < b.lambda || (r.lambda == b.lambda && r.delta < b.delta)));
        if (better) best = i;
    }
    if (best == results.size()) throw std::runtime_error("every grid configuration failed");
    return best;
}

GridSearchResult grid_search(const std::vector<SimilarityMatrix>& similarities, const Coordinates& coords,
                             const GridSpec& grid, const FitConfig& base, const GridOptions& options) {
    if (grid.points.empty()) throw std::invalid_argument("grid is empty");
    GridSearchResult out;
    out.all.resize(grid.points.size());

    auto config_for = [&](std::size_t idx) {
        FitConfig cfg = base;
        if (!options.common_random_numbers) cfg.seed = derive_seed(base.seed, {static_cast<std::uint64_t>(idx)});
        return cfg;
    };

    const std::size_t jobs = static_cast<std::size_t>(std::max(1, options.jobs));
    if (jobs == 1) {
        for (std::size_t i = 0; i < grid.points.size(); ++i)
            out.all[i] = fit_grid_point(similarities, coords, grid.points[i], config_for(i));
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        for (std::size_t w = 0; w < std::min(jobs, grid.points.size()); ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < grid.points.size(); i = next++)
                    out.all[i] = fit_grid_point(similarities, coords, grid.points[i], config_for(i));
            });
        }
        for (auto& t : workers) t.join();
    }

    out.best_index = select_best(out.all);
    if (!options.keep_all_comembership) {
        for (std::size_t i = 0; i < out.all.size(); ++i)
            if (i != out.best_index) out.all[i].summary.mean_comembership.resize(0, 0);
    }
    return out;
}

}  // namespace baysc
