#include "baysc/eval_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace baysc {

namespace {

void require_same_length(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("label vectors differ in length (" + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
}

std::vector<int> dense_ids(std::span<const int> labels, std::size_t* n_classes) {
    std::unordered_map<int, int> remap;
    std::vector<int> out;
    out.reserve(labels.size());
    for (int v : labels) out.push_back(remap.try_emplace(v, static_cast<int>(remap.size())).first->second);
    *n_classes = remap.size();
    return out;
}

double choose2(double x) { return 0.5 * x * (x - 1.0); }

double entropy(const std::vector<long long>& sums, double n) {
    double h = 0.0;
    for (long long c : sums) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
    }
    return h;
}

// Chance-adjusted score from a pair-disagreement penalty. `pairs_joined_truth`
// and `pairs_split_truth` are the (weighted) masses of pairs that share or do
// not share a truth class; `joined_fraction_pred` is the probability that a
// random pair shares a predicted class.
double adjusted_from_penalty(double penalty, double joined_truth_mass, double split_truth_mass,
                             double joined_fraction_pred) {
    const double expected = joined_truth_mass * (1.0 - joined_fraction_pred) + split_truth_mass * joined_fraction_pred;
    if (expected == 0.0) return penalty == 0.0 ? 1.0 : 0.0;
    return 1.0 - penalty / expected;
}

}  // namespace

ContingencyTable::ContingencyTable(std::span<const int> truth, std::span<const int> pred) {
    require_same_length(truth, pred);
    n_ = truth.size();
    std::size_t kt = 0;
    std::size_t kp = 0;
    const auto t = dense_ids(truth, &kt);
    const auto p = dense_ids(pred, &kp);
    counts_.assign(kt * kp, 0);
    row_sums_.assign(kt, 0);
    col_sums_.assign(kp, 0);
    for (std::size_t i = 0; i < n_; ++i) {
        ++counts_[static_cast<std::size_t>(t[i]) * kp + static_cast<std::size_t>(p[i])];
        ++row_sums_[static_cast<std::size_t>(t[i])];
        ++col_sums_[static_cast<std::size_t>(p[i])];
    }
}

double ari(std::span<const int> truth, std::span<const int> pred) {
    const ContingencyTable tab(truth, pred);
    const double n = static_cast<double>(tab.n());
    const double pairs = choose2(n);
    if (tab.n() < 2) return tab.rows() == tab.cols() ? 1.0 : 0.0;

    double joined_both = 0.0;
    for (std::size_t r = 0; r < tab.rows(); ++r)
        for (std::size_t c = 0; c < tab.cols(); ++c) joined_both += choose2(static_cast<double>(tab.at(r, c)));
    double joined_truth = 0.0;
    for (long long a : tab.row_sums()) joined_truth += choose2(static_cast<double>(a));
    double joined_pred = 0.0;
    for (long long b : tab.col_sums()) joined_pred += choose2(static_cast<double>(b));

    const double penalty = joined_truth + joined_pred - 2.0 * joined_both;
    return adjusted_from_penalty(penalty, joined_truth, pairs - joined_truth, joined_pred / pairs);
}

double expected_mutual_information(const ContingencyTable& tab) {
    const double n = static_cast<double>(tab.n());
    const double log_n = std::log(n);
    const double lg_n1 = std::lgamma(n + 1.0);
    double emi = 0.0;
    for (long long a : tab.row_sums()) {
        for (long long b : tab.col_sums()) {
            const long long lo = std::max(1LL, a + b - static_cast<long long>(tab.n()));
            const long long hi = std::min(a, b);
            const double ad = static_cast<double>(a);
            const double bd = static_cast<double>(b);
            const double base = std::lgamma(ad + 1.0) + std::lgamma(bd + 1.0) + std::lgamma(n - ad + 1.0) +
                                std::lgamma(n - bd + 1.0) - lg_n1;
            for (long long nij = lo; nij <= hi; ++nij) {
                const double x = static_cast<double>(nij);
                const double log_p = base - std::lgamma(x + 1.0) - std::lgamma(ad - x + 1.0) -
                                     std::lgamma(bd - x + 1.0) - std::lgamma(n - ad - bd + x + 1.0);
                emi += (x / n) * (std::log(x) + log_n - std::log(ad) - std::log(bd)) * std::exp(log_p);
            }
        }
    }
    return emi;
}

InformationScores nmi_ami_homogeneity(std::span<const int> truth, std::span<const int> pred) {
    const ContingencyTable tab(truth, pred);
    InformationScores out;
    if (tab.n() == 0) return {1.0, 1.0, 1.0};
    const double n = static_cast<double>(tab.n());
    const double ht = entropy(tab.row_sums(), n);
    const double hp = entropy(tab.col_sums(), n);

    double mi = 0.0;
    for (std::size_t r = 0; r < tab.rows(); ++r) {
        for (std::size_t c = 0; c < tab.cols(); ++c) {
            const double nij = static_cast<double>(tab.at(r, c));
            if (nij == 0.0) continue;
            const double a = static_cast<double>(tab.row_sums()[r]);
            const double b = static_cast<double>(tab.col_sums()[c]);
            mi += (nij / n) * std::log(n * nij / (a * b));
        }
    }
    mi = std::max(0.0, mi);

    const bool both_trivial = (tab.rows() == 1 && tab.cols() == 1) || (tab.rows() == tab.n() && tab.cols() == tab.n());

    if (ht * hp > 0.0)
        out.nmi = mi / std::sqrt(ht * hp);
    else
        out.nmi = both_trivial ? 1.0 : 0.0;

    out.homogeneity = ht == 0.0 ? 1.0 : 1.0 - (ht - mi) / ht;

    if (both_trivial) {
        out.ami = 1.0;
    } else {
        const double emi = expected_mutual_information(tab);
        double denom = 0.5 * (ht + hp) - emi;
        const double eps = std::numeric_limits<double>::epsilon();
        if (std::abs(denom) < eps) denom = denom < 0.0 ? -eps : eps;
        out.ami = (mi - emi) / denom;
    }
    out.nmi = std::clamp(out.nmi, 0.0, 1.0);
    out.homogeneity = std::clamp(out.homogeneity, 0.0, 1.0);
    return out;
}

double morans_i(std::span<const int> labels, const NeighborhoodGraph& graph, MoranReduction reduction) {
    const std::size_t n = labels.size();
    if (graph.n() != n) throw std::invalid_argument("graph size does not match label vector");
    const double s0 = 2.0 * static_cast<double>(graph.edge_count());
    if (s0 == 0.0) throw std::invalid_argument("Moran's I is undefined on an empty neighborhood graph");

    std::size_t k = 0;
    const auto z = dense_ids(labels, &k);
    std::vector<double> occupancy(k, 0.0);
    for (int c : z) occupancy[static_cast<std::size_t>(c)] += 1.0;

    const double nd = static_cast<double>(n);
    double weighted = 0.0;
    double plain = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
        const double mean = occupancy[c] / nd;
        double denom = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = (static_cast<std::size_t>(z[i]) == c ? 1.0 : 0.0) - mean;
            denom += x * x;
        }
        double ic = 0.0;
        if (denom > 0.0 && occupancy[c] < nd) {
            double num = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double xi = (static_cast<std::size_t>(z[i]) == c ? 1.0 : 0.0) - mean;
                for (auto j : graph.neighbors(i)) {
                    const double xj = (static_cast<std::size_t>(z[j]) == c ? 1.0 : 0.0) - mean;
                    num += xi * xj;
                }
            }
            ic = (nd / s0) * num / denom;
        }
        weighted += (occupancy[c] / nd) * ic;
        plain += ic;
        best = std::max(best, ic);
    }
    switch (reduction) {
        case MoranReduction::occupancy_weighted: return weighted;
        case MoranReduction::mean: return plain / static_cast<double>(k);
        case MoranReduction::max: return best;
    }
    return weighted;
}

double SpatialWeightFn::operator()(double d) const {
    if (kind == Kind::constant_one) return 1.0;
    if (!(d_max > 0.0)) return 1.0;
    return std::min(1.0, d / d_max);
}

double spari(std::span<const int> truth, std::span<const int> pred, const Coordinates& coords,
             const SpatialWeightFn& wfn) {
    require_same_length(truth, pred);
    const std::size_t n = truth.size();
    if (static_cast<std::size_t>(coords.n()) != n)
        throw std::invalid_argument("coordinates do not match the label vectors");
    if (n < 2) return ari(truth, pred);

    double joined_pred = 0.0;
    {
        const ContingencyTable tab(truth, pred);
        for (long long b : tab.col_sums()) joined_pred += choose2(static_cast<double>(b));
    }
    const double pairs = choose2(static_cast<double>(n));

    double penalty = 0.0;
    double joined_truth_mass = 0.0;
    double split_truth_mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = coords.positions(static_cast<Eigen::Index>(i), 0) - coords.positions(static_cast<Eigen::Index>(j), 0);
            const double dy = coords.positions(static_cast<Eigen::Index>(i), 1) - coords.positions(static_cast<Eigen::Index>(j), 1);
            const double w = wfn(std::sqrt(dx * dx + dy * dy));
            const bool same_t = truth[i] == truth[j];
            const bool same_p = pred[i] == pred[j];
            (same_t ? joined_truth_mass : split_truth_mass) += w;
            if (same_t != same_p) penalty += w;
        }
    }
    return adjusted_from_penalty(penalty, joined_truth_mass, split_truth_mass, joined_pred / pairs);
}

}  // namespace baysc
