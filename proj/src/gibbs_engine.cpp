#include "baysc/gibbs_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "baysc/errors.hpp"

namespace baysc {

InitMethod parse_init_method(const std::string& name) {
    if (name == "kmeans") return InitMethod::kmeans;
    if (name == "uniform") return InitMethod::uniform;
    throw std::invalid_argument("unknown init method '" + name + "' (expected kmeans or uniform)");
}

std::string to_string(InitMethod m) { return m == InitMethod::kmeans ? "kmeans" : "uniform"; }

namespace detail {

std::vector<int> kmeans_rows(const Eigen::MatrixXd& x, int k, Rng& rng, int max_iter) {
    const Eigen::Index n = x.rows();
    if (n == 0) return {};
    k = static_cast<int>(std::min<Eigen::Index>(k, n));
    Eigen::MatrixXd centers(k, x.cols());
    Eigen::VectorXd nearest = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
    Eigen::Index pick = first(rng);
    for (int c = 0; c < k; ++c) {
        centers.row(c) = x.row(pick);
        for (Eigen::Index i = 0; i < n; ++i)
            nearest(i) = std::min(nearest(i), (x.row(i) - centers.row(c)).squaredNorm());
        const double total = nearest.sum();
        if (c + 1 == k) break;
        if (!(total > 0.0)) {
            // fewer distinct rows than k
            centers.conservativeResize(c + 1, Eigen::NoChange);
            k = c + 1;
            break;
        }
        const double u = draw_uniform(rng) * total;
        double acc = 0.0;
        pick = n - 1;
        for (Eigen::Index i = 0; i < n; ++i) {
            acc += nearest(i);
            if (u < acc && nearest(i) > 0.0) {
                pick = i;
                break;
            }
        }
    }

    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    for (int iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = (x.row(i) - centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (labels[static_cast<std::size_t>(i)] != best) {
                labels[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }
        if (!changed) break;
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
            ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
        }
        for (int c = 0; c < k; ++c)
            if (counts[static_cast<std::size_t>(c)] > 0) centers.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
    }
    canonicalize_labels(labels);
    return labels;
}

}  // namespace detail

void FitConfig::validate(std::size_t n_modalities, bool require_positive_weight) const {
    if (n_modalities == 0) throw std::invalid_argument("at least one modality is required");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite and >= 0");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    if (n_iterations < 1) throw std::invalid_argument("n_iterations must be >= 1");
    if (n_burnin < 0 || n_burnin >= n_iterations) throw std::invalid_argument("need 0 <= n_burnin < n_iterations");
    if (thin < 1) throw std::invalid_argument("thin must be >= 1");
    if (init_k < 1) throw std::invalid_argument("init_k must be >= 1");
    if (!(k0 > 0.0 && alpha > 0.0 && beta > 0.0)) throw std::invalid_argument("k0, alpha, beta must be > 0");
    if (!weights.empty() && weights.size() != n_modalities)
        throw std::invalid_argument("got " + std::to_string(weights.size()) + " modality weights for " +
                                    std::to_string(n_modalities) + " modalities");
    bool any_positive = weights.empty();
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("modality weights must be finite and >= 0");
        any_positive = any_positive || w > 0.0;
    }
    if (require_positive_weight && !any_positive)
        throw std::invalid_argument("at least one modality weight must be positive");
}

std::vector<double> FitConfig::resolved_weights(std::size_t n_modalities) const {
    if (weights.empty()) return std::vector<double>(n_modalities, 1.0);
    return weights;
}

ModelInputs ModelInputs::make(std::vector<SimilarityMatrix> similarities, NeighborhoodGraph graph, double k0,
                              double alpha, double beta) {
    ModelInputs in;
    in.similarities = std::move(similarities);
    in.graph = std::move(graph);
    if (in.graph.n() < 2) throw std::invalid_argument("need at least 2 cells");
    for (std::size_t m = 0; m < in.similarities.size(); ++m) {
        if (static_cast<std::size_t>(in.similarities[m].n()) != in.graph.n())
            throw std::invalid_argument("modality " + std::to_string(m) + " has " +
                                        std::to_string(in.similarities[m].n()) + " cells, graph has " +
                                        std::to_string(in.graph.n()));
        in.priors.push_back(empirical_prior(in.similarities[m], k0, alpha, beta));
    }
    return in;
}

std::vector<double> LabelScores::probabilities() const {
    std::vector<double> p(size());
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < size(); ++c) mx = std::max(mx, total(c));
    double z = 0.0;
    for (std::size_t c = 0; c < size(); ++c) z += (p[c] = std::exp(total(c) - mx));
    for (double& v : p) v /= z;
    return p;
}

GibbsSampler::GibbsSampler(const ModelInputs& inputs, FitConfig config, bool require_positive_weight)
    : inputs_(inputs),
      config_(std::move(config)),
      weights_(config_.resolved_weights(inputs.n_modalities())),
      mfm_(static_cast<int>(inputs.n()), config_.gamma) {
    config_.validate(inputs.n_modalities(), require_positive_weight);
    if (inputs_.priors.size() != inputs_.n_modalities())
        throw std::invalid_argument("ModelInputs priors are missing; build inputs with ModelInputs::make");
}

ChainState GibbsSampler::init_chain() const {
    Rng rng = make_rng(config_.seed, {0, 2});
    const std::size_t n = inputs_.n();
    std::vector<int> raw(n);
    bool any_weight = false;
    for (double w : weights_) any_weight = any_weight || w > 0.0;
    if (config_.init_method == InitMethod::kmeans && any_weight) {
        Eigen::MatrixXd features(static_cast<Eigen::Index>(n), 0);
        for (std::size_t m = 0; m < inputs_.n_modalities(); ++m) {
            if (weights_[m] == 0.0) continue;
            const Eigen::Index off = features.cols();
            features.conservativeResize(Eigen::NoChange, off + static_cast<Eigen::Index>(n));
            features.rightCols(static_cast<Eigen::Index>(n)) = std::sqrt(weights_[m]) * inputs_.similarities[m].values;
        }
        raw = detail::kmeans_rows(features, config_.init_k, rng);
    } else {
        std::uniform_int_distribution<int> pick(0, config_.init_k - 1);
        for (auto& z : raw) z = pick(rng);
    }
    ChainState state;
    state.partition = Partition::from_labels(raw);
    const int k = state.partition.k();
    for (std::size_t m = 0; m < inputs_.n_modalities(); ++m) {
        const BlockStats stats = config_.init_params_from_posterior
                                     ? block_stats(inputs_.similarities[m], state.partition.labels, k,
                                                   config_.include_diagonal_in_blocks)
                                     : BlockStats(k);
        state.params.push_back(resample_block_params(stats, inputs_.priors[m], rng));
    }
    return state;
}

void GibbsSampler::remove_cell(ChainState& state, int i) const {
    auto& part = state.partition;
    const int old = part.labels[static_cast<std::size_t>(i)];
    part.labels[static_cast<std::size_t>(i)] = -1;
    if (--part.occupancy[static_cast<std::size_t>(old)] > 0) return;

    part.occupancy.erase(part.occupancy.begin() + old);
    for (int& z : part.labels)
        if (z > old) --z;
    std::vector<int> keep;
    for (int c = 0; c <= part.k(); ++c)
        if (c != old) keep.push_back(c);
    for (auto& p : state.params) {
        Eigen::MatrixXd means = p.means(keep, keep);
        Eigen::MatrixXd precisions = p.precisions(keep, keep);
        p.means = std::move(means);
        p.precisions = std::move(precisions);
    }
}

LabelScores GibbsSampler::score_cell(const ChainState& state, int i) const {
    const auto& part = state.partition;
    const int k = part.k();
    const std::size_t n = part.n();
    const auto ui = static_cast<std::size_t>(i);
    LabelScores sc;
    sc.likelihood.assign(static_cast<std::size_t>(k) + 1, 0.0);
    sc.spatial.assign(static_cast<std::size_t>(k) + 1, 0.0);
    sc.urn.resize(static_cast<std::size_t>(k) + 1);

    std::vector<double> cnt(static_cast<std::size_t>(k));
    std::vector<double> sum(static_cast<std::size_t>(k));
    std::vector<double> sq(static_cast<std::size_t>(k));
    for (std::size_t m = 0; m < inputs_.n_modalities(); ++m) {
        const double w = weights_[m];
        if (w == 0.0) continue;
        const auto& a = inputs_.similarities[m].values;
        const auto& p = state.params[m];
        std::fill(cnt.begin(), cnt.end(), 0.0);
        std::fill(sum.begin(), sum.end(), 0.0);
        std::fill(sq.begin(), sq.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const int s = part.labels[j];
            if (s < 0) continue;
            const double v = a(static_cast<Eigen::Index>(ui), static_cast<Eigen::Index>(j));
            cnt[static_cast<std::size_t>(s)] += 1.0;
            sum[static_cast<std::size_t>(s)] += v;
            sq[static_cast<std::size_t>(s)] += v * v;
        }
        const double norm = config_.normalized_likelihood ? kHalfLog2Pi : 0.0;
        for (int c = 0; c < k; ++c) {
            double ell = 0.0;
            for (int s = 0; s < k; ++s) {
                const auto us = static_cast<std::size_t>(s);
                if (cnt[us] == 0.0) continue;
                const double tau = p.precisions(c, s);
                const double mu = p.means(c, s);
                const double rss = sq[us] - 2.0 * mu * sum[us] + cnt[us] * mu * mu;
                ell += cnt[us] * (0.5 * std::log(tau) - norm) - 0.5 * tau * rss;
            }
            sc.likelihood[static_cast<std::size_t>(c)] += w * ell;
        }
        sc.likelihood[static_cast<std::size_t>(k)] +=
            w * new_domain_marginal(a(i, i), inputs_.priors[m], config_.normalized_likelihood);
    }

    if (config_.lambda != 0.0) {
        for (auto j : inputs_.graph.neighbors(ui)) {
            const int s = part.labels[j];
            if (s >= 0) sc.spatial[static_cast<std::size_t>(s)] += config_.lambda;
        }
    }

    for (int c = 0; c < k; ++c)
        sc.urn[static_cast<std::size_t>(c)] = urn_log_weight_existing(part.occupancy[static_cast<std::size_t>(c)], config_.gamma);
    sc.urn[static_cast<std::size_t>(k)] = urn_log_weight_new(k, mfm_);

    for (std::size_t c = 0; c < sc.size(); ++c) {
        if (!std::isfinite(sc.total(c))) {
            std::ostringstream msg;
            msg << "non-finite label weight for cell " << i << ", candidate "
                << (c == static_cast<std::size_t>(k) ? std::string("new") : std::to_string(c))
                << ": likelihood=" << sc.likelihood[c] << " spatial=" << sc.spatial[c] << " urn=" << sc.urn[c];
            throw NumericError(msg.str());
        }
    }
    return sc;
}

void GibbsSampler::assign_cell(ChainState& state, int i, int c, Rng& rng) const {
    auto& part = state.partition;
    const int k = part.k();
    if (c < 0 || c > k) throw std::out_of_range("candidate domain out of range");
    part.labels[static_cast<std::size_t>(i)] = c;
    if (c < k) {
        ++part.occupancy[static_cast<std::size_t>(c)];
        return;
    }
    part.occupancy.push_back(1);
    for (std::size_t m = 0; m < state.params.size(); ++m) {
        auto& p = state.params[m];
        p.means.conservativeResize(k + 1, k + 1);
        p.precisions.conservativeResize(k + 1, k + 1);
        for (int s = 0; s <= k; ++s) {
            const auto [mu, tau] = draw_block_from_prior(inputs_.priors[m], s == k, rng);
            p.means(k, s) = p.means(s, k) = mu;
            p.precisions(k, s) = p.precisions(s, k) = tau;
        }
    }
}

int GibbsSampler::label_update(ChainState& state, int i, Rng& rng) const {
    remove_cell(state, i);
    const LabelScores sc = score_cell(state, i);
    const std::vector<double> prob = sc.probabilities();
    const double u = draw_uniform(rng);
    std::size_t chosen = prob.size() - 1;
    double acc = 0.0;
    for (std::size_t c = 0; c < prob.size(); ++c) {
        acc += prob[c];
        if (u < acc) {
            chosen = c;
            break;
        }
    }
    assign_cell(state, i, static_cast<int>(chosen), rng);
    return static_cast<int>(chosen);
}

void GibbsSampler::resample_params(ChainState& state, Rng& rng) const {
    state.params.resize(inputs_.n_modalities());
    for (std::size_t m = 0; m < inputs_.n_modalities(); ++m) {
        const BlockStats stats = block_stats(inputs_.similarities[m], state.partition.labels, state.partition.k(),
                                             config_.include_diagonal_in_blocks);
        state.params[m] = resample_block_params(stats, inputs_.priors[m], rng);
    }
}

double GibbsSampler::sweep(ChainState& state, int iteration) const {
    const auto it = static_cast<std::uint64_t>(iteration);
    Rng label_rng = make_rng(config_.seed, {it, 0});
    const std::size_t n = inputs_.n();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (config_.random_scan) std::shuffle(order.begin(), order.end(), label_rng);
    for (int i : order) label_update(state, i, label_rng);

    // Canonical numbering (first appearance) so that parameter draws below
    // depend only on the partition, not on the path that produced it.
    auto& part = state.partition;
    canonicalize_labels(part.labels);
    part.occupancy.assign(part.occupancy.size(), 0);
    for (int z : part.labels) ++part.occupancy[static_cast<std::size_t>(z)];

    Rng param_rng = make_rng(config_.seed, {it, 1});
    resample_params(state, param_rng);
    return deviance(state);
}

double GibbsSampler::deviance(const ChainState& state) const {
    return full_deviance(inputs_.similarities, weights_, state.partition.labels, state.params);
}

std::vector<ChainSample> GibbsSampler::run(std::ostream* trace) const {
    ChainState state = init_chain();
    std::vector<ChainSample> samples;
    samples.reserve(static_cast<std::size_t>((config_.n_iterations - config_.n_burnin) / config_.thin));
    for (int t = 1; t <= config_.n_iterations; ++t) {
        const double dev = sweep(state, t);
        if (!std::isfinite(dev)) throw NumericError("non-finite deviance at iteration " + std::to_string(t));
        if (trace) {
            *trace << t << '\t' << state.partition.k() << '\t' << dev;
            for (int z : state.partition.labels) *trace << '\t' << z + 1;
            *trace << '\n';
        }
        if (t > config_.n_burnin && (t - config_.n_burnin) % config_.thin == 0) {
            samples.push_back(ChainSample{t, state.partition.labels, state.partition.k(), state.params, dev});
        }
    }
    return samples;
}

std::vector<ChainSample> run_chain(const ModelInputs& inputs, const FitConfig& config, std::ostream* trace) {
    return GibbsSampler(inputs, config).run(trace);
}

}  // namespace baysc
