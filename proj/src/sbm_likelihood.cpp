#include "baysc/sbm_likelihood.hpp"

#include <cmath>
#include <stdexcept>

namespace baysc {

void NormalGammaPrior::validate() const {
    if (!(k0 > 0.0 && alpha > 0.0 && beta > 0.0))
        throw std::invalid_argument("Normal-Gamma prior requires k0, alpha, beta > 0");
}

NormalGammaPrior empirical_prior(const SimilarityMatrix& a, double k0, double alpha, double beta) {
    const Eigen::Index n = a.n();
    if (n < 2) throw std::invalid_argument("empirical prior needs at least 2 cells");
    NormalGammaPrior prior;
    prior.mu0_diag = a.values.diagonal().mean();
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) off += a.values(i, j);
    prior.mu0_offdiag = off / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
    prior.k0 = k0;
    prior.alpha = alpha;
    prior.beta = beta;
    prior.validate();
    return prior;
}

BlockStats block_stats(const SimilarityMatrix& a, std::span<const int> labels, int k, bool include_diagonal) {
    const auto n = static_cast<Eigen::Index>(labels.size());
    if (a.n() != n) throw std::invalid_argument("label vector length does not match similarity matrix");
    BlockStats stats(k);
    std::vector<double> sums(static_cast<std::size_t>(k * k), 0.0);

    auto visit = [&](auto&& fn) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const int zi = labels[i];
            for (Eigen::Index j = include_diagonal ? i : i + 1; j < n; ++j) {
                const int zj = labels[j];
                fn(std::min(zi, zj), std::max(zi, zj), a.values(i, j));
            }
        }
    };

    visit([&](int r, int s, double v) {
        stats.at(r, s).count += 1.0;
        sums[static_cast<std::size_t>(r * k + s)] += v;
    });
    for (int r = 0; r < k; ++r)
        for (int s = r; s < k; ++s) {
            auto& st = stats.at(r, s);
            if (st.count > 0.0) st.mean = sums[static_cast<std::size_t>(r * k + s)] / st.count;
        }
    visit([&](int r, int s, double v) {
        auto& st = stats.at(r, s);
        const double d = v - st.mean;
        st.sse += d * d;
    });
    for (int r = 0; r < k; ++r)
        for (int s = r + 1; s < k; ++s) stats.at(s, r) = stats.at(r, s);
    return stats;
}

NormalGammaPosterior posterior_hyperparams(const BlockStat& stat, const NormalGammaPrior& prior, bool within) {
    const double mu0 = prior.mu0(within);
    const double n = stat.count;
    NormalGammaPosterior post;
    post.k_n = prior.k0 + n;
    post.mu_n = (prior.k0 * mu0 + n * stat.mean) / post.k_n;
    post.alpha_n = prior.alpha + 0.5 * n;
    const double dev = stat.mean - mu0;
    post.beta_n = prior.beta + 0.5 * (stat.sse + n * prior.k0 / post.k_n * dev * dev);
    if (n == 0.0) {
        post.mu_n = mu0;
        post.beta_n = prior.beta;
    }
    return post;
}

namespace {

std::pair<double, double> draw_from(const NormalGammaPosterior& post, Rng& rng) {
    const double tau = draw_gamma(rng, post.alpha_n, post.beta_n);
    const double mu = draw_normal(rng, post.mu_n, 1.0 / std::sqrt(post.k_n * tau));
    return {mu, tau};
}

}  // namespace

BlockParams resample_block_params(const BlockStats& stats, const NormalGammaPrior& prior, Rng& rng) {
    const int k = stats.k();
    BlockParams params{Eigen::MatrixXd(k, k), Eigen::MatrixXd(k, k)};
    for (int r = 0; r < k; ++r) {
        for (int s = r; s < k; ++s) {
            const auto [mu, tau] = draw_from(posterior_hyperparams(stats.at(r, s), prior, r == s), rng);
            params.means(r, s) = params.means(s, r) = mu;
            params.precisions(r, s) = params.precisions(s, r) = tau;
        }
    }
    return params;
}

std::pair<double, double> draw_block_from_prior(const NormalGammaPrior& prior, bool within, Rng& rng) {
    return draw_from(posterior_hyperparams(BlockStat{}, prior, within), rng);
}

double cell_conditional_loglik(const SimilarityMatrix& a, std::span<const int> labels, const BlockParams& params,
                               int i, int c, bool normalized) {
    const auto n = static_cast<Eigen::Index>(labels.size());
    double total = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        const int s = labels[j];
        const double tau = params.precisions(c, s);
        const double r = a.values(i, j) - params.means(c, s);
        total += 0.5 * std::log(tau) - 0.5 * tau * r * r;
        if (normalized) total -= kHalfLog2Pi;
    }
    return total;
}

double new_domain_marginal(double a_ii, const NormalGammaPrior& prior, bool normalized) {
    const double k_n = prior.k0 + 1.0;
    const double alpha_n = prior.alpha + 0.5;
    const double dev = a_ii - prior.mu0_diag;
    const double beta_n = prior.beta + prior.k0 / (2.0 * k_n) * dev * dev;
    double out = std::lgamma(alpha_n) - std::lgamma(prior.alpha) + prior.alpha * std::log(prior.beta) -
                 alpha_n * std::log(beta_n) + 0.5 * std::log(prior.k0 / k_n);
    if (normalized) out -= kHalfLog2Pi;
    return out;
}

double full_deviance(std::span<const SimilarityMatrix> a_all, std::span<const double> weights,
                     std::span<const int> labels, std::span<const BlockParams> params) {
    if (a_all.size() != weights.size() || a_all.size() != params.size())
        throw std::invalid_argument("full_deviance: modality count mismatch");
    const auto n = static_cast<Eigen::Index>(labels.size());
    double total = 0.0;
    for (std::size_t m = 0; m < a_all.size(); ++m) {
        if (weights[m] == 0.0) continue;
        const auto& a = a_all[m].values;
        const auto& p = params[m];
        const Eigen::MatrixXd log_tau = p.precisions.array().log();
        double loglik = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const int zi = labels[i];
            for (Eigen::Index j = i; j < n; ++j) {
                const int zj = labels[j];
                const double tau = p.precisions(zi, zj);
                const double r = a(i, j) - p.means(zi, zj);
                loglik += -kHalfLog2Pi + 0.5 * log_tau(zi, zj) - 0.5 * tau * r * r;
            }
        }
        total += -2.0 * weights[m] * loglik;
    }
    return total;
}

}  // namespace baysc
