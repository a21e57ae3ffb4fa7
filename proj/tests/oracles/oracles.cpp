#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

namespace bq = boost::math::quadrature;
using big = boost::multiprecision::cpp_bin_float_50;
using boost::multiprecision::cpp_int;

namespace {

// Integral over tau in (0, inf) of the inner integral over mu.
double integrate_2d(const std::function<double(double, double)>& f, double mu_lo, double mu_hi, double prec_per_tau) {
    auto inner = [&](double tau) {
        if (!(tau > 0.0)) return 0.0;
        const double sd = 1.0 / std::sqrt(prec_per_tau * tau);
        const double lo = mu_lo - 15.0 * sd;
        const double hi = mu_hi + 15.0 * sd;
        return bq::gauss_kronrod<double, 61>::integrate([&](double mu) { return f(mu, tau); }, lo, hi, 15, 1e-12);
    };
    bq::exp_sinh<double> outer;
    return outer.integrate(inner, 1e-11);
}

}  // namespace

PosteriorMoments ng_posterior_by_quadrature(const std::vector<double>& x, const NgPrior& p) {
    const double n = static_cast<double>(x.size());
    double lo = p.mu0, hi = p.mu0;
    for (double v : x) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // Unnormalized log density, shifted by a constant so values stay O(1).
    auto log_f = [&](double mu, double tau) {
        double ss = 0.0;
        for (double v : x) ss += (v - mu) * (v - mu);
        return (p.alpha - 1.0 + 0.5 + 0.5 * n) * std::log(tau) - p.beta * tau - 0.5 * p.k0 * tau * (mu - p.mu0) * (mu - p.mu0) -
               0.5 * tau * ss;
    };
    // Reference point: crude grid maximum.
    double ref = -std::numeric_limits<double>::infinity();
    for (int a = 0; a <= 40; ++a)
        for (int b = 1; b <= 200; ++b) ref = std::max(ref, log_f(lo + (hi - lo) * a / 40.0, 0.05 * b));

    const double prec = p.k0 + n;
    const double z = integrate_2d([&](double mu, double tau) { return std::exp(log_f(mu, tau) - ref); }, lo, hi, prec);
    const double zm =
        integrate_2d([&](double mu, double tau) { return mu * std::exp(log_f(mu, tau) - ref); }, lo, hi, prec);
    const double zt =
        integrate_2d([&](double mu, double tau) { return tau * std::exp(log_f(mu, tau) - ref); }, lo, hi, prec);

    // Constants dropped from log_f: prior normalizer and (2 pi)^(-n/2).
    const double log_const = p.alpha * std::log(p.beta) - std::lgamma(p.alpha) + 0.5 * std::log(p.k0 / (2.0 * M_PI)) -
                             0.5 * n * std::log(2.0 * M_PI);
    return {zm / z, zt / z, std::log(z) + ref + log_const};
}

double ng_marginal_by_quadrature(double a, const NgPrior& p) {
    auto f = [&](double mu, double tau) {
        const double log_prior = p.alpha * std::log(p.beta) - std::lgamma(p.alpha) + (p.alpha - 1.0) * std::log(tau) -
                                 p.beta * tau + 0.5 * std::log(p.k0 * tau / (2.0 * M_PI)) -
                                 0.5 * p.k0 * tau * (mu - p.mu0) * (mu - p.mu0);
        const double log_lik = 0.5 * std::log(tau / (2.0 * M_PI)) - 0.5 * tau * (a - mu) * (a - mu);
        return std::exp(log_prior + log_lik);
    };
    return std::log(integrate_2d(f, std::min(a, p.mu0), std::max(a, p.mu0), p.k0 + 1.0));
}

double log_vn_multiprecision(int n, double gamma, int t) {
    if (t < 1) throw std::invalid_argument("need t >= 1");
    const big g(gamma);
    const big e1 = exp(big(-1));
    const big pnorm = e1 / (big(1) - e1);
    big sum = 0;
    big k_fact = 1;  // k!
    for (int k = 1; k < t; ++k) k_fact *= k;
    for (int k = t; k < 5000; ++k) {
        k_fact *= k;
        big falling = 1;  // k! / (k - t)!
        for (int i = 0; i < t; ++i) falling *= (k - i);
        big rising = 1;  // (gamma k)(gamma k + 1)...(gamma k + n - 1)
        for (int i = 0; i < n; ++i) rising *= (g * k + i);
        const big term = falling / rising * pnorm / k_fact;
        sum += term;
        if (k > t + 5 && term < sum * big("1e-45")) break;
    }
    return static_cast<double>(log(sum));
}

std::vector<double> mfm_k_marginal_bruteforce(int n, double gamma) {
    std::vector<big> mass(static_cast<std::size_t>(n) + 1, big(0));
    std::vector<big> vn(static_cast<std::size_t>(n) + 1);
    for (int t = 1; t <= n; ++t) vn[static_cast<std::size_t>(t)] = exp(big(log_vn_multiprecision(n, gamma, t)));

    // Restricted growth strings enumerate each set partition once.
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int i, int k) {
        if (i == n) {
            std::vector<int> sizes(static_cast<std::size_t>(k), 0);
            for (int v : a) ++sizes[static_cast<std::size_t>(v)];
            big w = vn[static_cast<std::size_t>(k)];
            for (int s : sizes)
                for (int j = 0; j < s; ++j) w *= (big(gamma) + j);
            mass[static_cast<std::size_t>(k)] += w;
            return;
        }
        for (int v = 0; v <= k; ++v) {
            a[static_cast<std::size_t>(i)] = v;
            rec(i + 1, std::max(k, v + 1));
        }
    };
    rec(0, 0);
    big total = 0;
    for (const auto& m : mass) total += m;
    std::vector<double> out;
    for (const auto& m : mass) out.push_back(static_cast<double>(m / total));
    return out;
}

double ari_pairs(const std::vector<int>& truth, const std::vector<int>& pred) {
    const std::size_t n = truth.size();
    long double both = 0, same_t = 0, same_p = 0, pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool st = truth[i] == truth[j];
            const bool sp = pred[i] == pred[j];
            pairs += 1;
            same_t += st;
            same_p += sp;
            both += st && sp;
        }
    if (n < 2) return truth == pred ? 1.0 : 0.0;
    const long double expected = same_t * same_p / pairs;
    const long double max_index = 0.5L * (same_t + same_p);
    if (max_index == expected) return both == expected ? 1.0 : 0.0;
    return static_cast<double>((both - expected) / (max_index - expected));
}

InfoScores info_scores_direct(const std::vector<int>& truth, const std::vector<int>& pred) {
    const std::size_t n = truth.size();
    std::map<int, long> a, b;
    std::map<std::pair<int, int>, long> c;
    for (std::size_t i = 0; i < n; ++i) {
        ++a[truth[i]];
        ++b[pred[i]];
        ++c[{truth[i], pred[i]}];
    }
    const big N(static_cast<long>(n));
    big ht = 0, hp = 0, mi = 0, h_t_given_p = 0;
    for (auto& [k, v] : a) ht -= big(v) / N * log(big(v) / N);
    for (auto& [k, v] : b) hp -= big(v) / N * log(big(v) / N);
    for (auto& [key, v] : c) {
        const big nij(v);
        const big ai(a[key.first]), bj(b[key.second]);
        mi += nij / N * log(N * nij / (ai * bj));
        h_t_given_p -= nij / N * log(nij / bj);
    }

    auto binom = [](long nn, long kk) {
        cpp_int r = 1;
        for (long i = 1; i <= kk; ++i) r = r * (nn - kk + i) / i;
        return r;
    };
    const long nn = static_cast<long>(n);
    big emi = 0;
    for (auto& [ki, ai] : a)
        for (auto& [kj, bj] : b) {
            const big denom(binom(nn, bj));
            for (long nij = std::max(1L, ai + bj - nn); nij <= std::min(ai, bj); ++nij) {
                // P(n_ij) = C(a, n_ij) C(N - a, b - n_ij) / C(N, b)
                const big p = big(binom(ai, nij) * binom(nn - ai, bj - nij)) / denom;
                emi += p * big(nij) / N * log(N * big(nij) / (big(ai) * big(bj)));
            }
        }

    InfoScores s{};
    s.mi = static_cast<double>(mi);
    s.emi = static_cast<double>(emi);
    const bool both_trivial =
        (a.size() == 1 && b.size() == 1) || (a.size() == n && b.size() == n);
    if (ht * hp > 0)
        s.nmi = static_cast<double>(mi / sqrt(ht * hp));
    else
        s.nmi = both_trivial ? 1.0 : 0.0;
    s.homogeneity = ht == 0 ? 1.0 : static_cast<double>(1 - h_t_given_p / ht);
    s.ami = both_trivial ? 1.0 : static_cast<double>((mi - emi) / ((ht + hp) / 2 - emi));
    return s;
}

double morans_i_dense(const std::vector<int>& labels, const Eigen::MatrixXd& w) {
    const auto n = static_cast<Eigen::Index>(labels.size());
    const double s0 = w.sum();
    std::map<int, int> occ;
    for (int z : labels) ++occ[z];
    double total = 0.0;
    for (auto& [c, count] : occ) {
        Eigen::VectorXd x(n);
        for (Eigen::Index i = 0; i < n; ++i) x(i) = labels[static_cast<std::size_t>(i)] == c ? 1.0 : 0.0;
        x.array() -= x.mean();
        const double den = x.squaredNorm();
        double ic = 0.0;
        if (den > 0.0) {
            double num = 0.0;
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) num += w(i, j) * x(i) * x(j);
            ic = static_cast<double>(n) / s0 * num / den;
        }
        total += static_cast<double>(count) / static_cast<double>(n) * ic;
    }
    return total;
}

std::size_t dahl_bruteforce(const std::vector<std::vector<int>>& samples) {
    const std::size_t m = samples.size();
    const std::size_t n = samples.at(0).size();
    // Work with M * Bbar (integer counts) and M * B^(t); the loss scales by M^2.
    std::vector<long long> sum(n * n, 0);
    for (const auto& s : samples)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) sum[i * n + j] += s[i] == s[j];
    std::size_t best = 0;
    long long best_loss = std::numeric_limits<long long>::max();
    for (std::size_t t = 0; t < m; ++t) {
        long long loss = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const long long d = static_cast<long long>(m) * (samples[t][i] == samples[t][j]) - sum[i * n + j];
                loss += d * d;
            }
        if (loss < best_loss) {
            best_loss = loss;
            best = t;
        }
    }
    return best;
}

std::vector<std::vector<PairBlock>> block_stats_pairs(const Eigen::MatrixXd& a, const std::vector<int>& labels, int k,
                                                      bool include_diagonal) {
    std::vector<std::vector<std::vector<double>>> vals(static_cast<std::size_t>(k),
                                                       std::vector<std::vector<double>>(static_cast<std::size_t>(k)));
    const auto n = labels.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = include_diagonal ? i : i + 1; j < n; ++j) {
            int r = labels[i], s = labels[j];
            if (r > s) std::swap(r, s);
            vals[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)].push_back(
                a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
    std::vector<std::vector<PairBlock>> out(static_cast<std::size_t>(k), std::vector<PairBlock>(static_cast<std::size_t>(k)));
    for (int r = 0; r < k; ++r)
        for (int s = r; s < k; ++s) {
            const auto& v = vals[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
            PairBlock b;
            b.count = static_cast<double>(v.size());
            if (!v.empty()) {
                long double m = 0;
                for (double x : v) m += x;
                m /= v.size();
                long double sse = 0;
                for (double x : v) sse += (x - m) * (x - m);
                b.mean = static_cast<double>(m);
                b.sse = static_cast<double>(sse);
            }
            out[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] = b;
            out[static_cast<std::size_t>(s)][static_cast<std::size_t>(r)] = b;
        }
    return out;
}

std::vector<int> random_labels(std::mt19937_64& rng, int n, int k) {
    std::uniform_int_distribution<int> d(0, k - 1);
    std::vector<int> z(static_cast<std::size_t>(n));
    for (auto& v : z) v = d(rng);
    return z;
}

}  // namespace oracle
