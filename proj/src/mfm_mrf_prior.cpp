#include "baysc/mfm_mrf_prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "baysc/errors.hpp"

namespace baysc {

double log_truncated_poisson1(int k) {
    // e^{-1} / (k! (1 - e^{-1}))
    return -1.0 - std::lgamma(static_cast<double>(k) + 1.0) - std::log1p(-std::exp(-1.0));
}

double log_vn_series(int n, double gamma, int t, int* k_cap, double rel_tol) {
    if (n < 1 || t < 1) throw std::invalid_argument("log_vn_series needs n >= 1 and t >= 1");
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");

    auto log_term = [&](int k) {
        const double kd = static_cast<double>(k);
        const double falling = std::lgamma(kd + 1.0) - std::lgamma(kd - t + 1.0);
        const double rising = std::lgamma(gamma * kd + n) - std::lgamma(gamma * kd);
        return falling - rising + log_truncated_poisson1(k);
    };

    // Terms are log-concave in k beyond the mode; accumulate with a running
    // max and stop once a geometric bound on the tail is negligible. For
    // k >= t the ratio term(k+1)/term(k) is at most 1/(k+1-t).
    double max_log = -std::numeric_limits<double>::infinity();
    double scaled = 0.0;  // sum exp(log_term - max_log)
    constexpr int kLimit = 1'000'000;
    int k = t;
    for (; k < kLimit; ++k) {
        const double lt = log_term(k);
        if (lt > max_log) {
            scaled = scaled * std::exp(max_log - lt) + 1.0;
            max_log = lt;
        } else {
            scaled += std::exp(lt - max_log);
        }
        const double q = 1.0 / static_cast<double>(k + 1 - t);
        if (q < 1.0) {
            const double tail = std::exp(lt - max_log) * q / (1.0 - q);
            if (tail < rel_tol * scaled) break;
        }
    }
    if (k >= kLimit) throw NumericError("V_n series failed to converge for n = " + std::to_string(n));
    if (k_cap) *k_cap = k;
    return max_log + std::log(scaled);
}

MfmPrior::MfmPrior(int n, double gamma, int t_max) : n_(n), gamma_(gamma) {
    if (n < 1) throw std::invalid_argument("MfmPrior needs n >= 1");
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    if (t_max < 0) t_max = std::min(n, 50);
    extend_to(t_max);
}

void MfmPrior::extend_to(int t_max) const {
    for (int t = static_cast<int>(log_vn_.size()) + 1; t <= t_max; ++t) {
        const double v = log_vn_series(n_, gamma_, t);
        if (!std::isfinite(v)) throw NumericError("log V_n(" + std::to_string(t) + ") is not finite");
        log_vn_.push_back(v);
    }
}

double MfmPrior::log_vn(int t) const {
    if (t < 1) throw std::out_of_range("log V_n(t) requested for t = " + std::to_string(t) + " < 1");
    if (t > t_max()) extend_to(std::max(t, std::min(n_, 2 * t_max())));
    return log_vn_[static_cast<std::size_t>(t - 1)];
}

int MfmPrior::series_cap(int t) const {
    int cap = 0;
    log_vn_series(n_, gamma_, t, &cap);
    return cap;
}

double urn_log_weight_existing(int n_c_minus_i, double gamma) {
    return std::log(static_cast<double>(n_c_minus_i) + gamma);
}

double urn_log_weight_new(int k_star, const MfmPrior& mfm) {
    return std::log(mfm.gamma()) + mfm.log_vn(k_star + 1) - mfm.log_vn(k_star);
}

double mrf_log_reward(std::span<const int> labels, const NeighborhoodGraph& graph, int i, int c, double lambda) {
    if (c < 0 || lambda == 0.0) return 0.0;
    int same = 0;
    for (auto j : graph.neighbors(static_cast<std::size_t>(i)))
        if (labels[j] == c) ++same;
    return lambda * static_cast<double>(same);
}

double lambda_critical(int k, const NeighborhoodGraph& graph) {
    const double c = graph.avg_degree();
    if (c <= 0.0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(k) / c;
}

}  // namespace baysc
