#include "baysc/posterior_summary.hpp"

#include <algorithm>
#include <stdexcept>

namespace baysc {

Eigen::MatrixXd comembership(std::span<const int> labels) {
    const auto n = static_cast<Eigen::Index>(labels.size());
    Eigen::MatrixXd b(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) b(i, j) = labels[i] == labels[j] ? 1.0 : 0.0;
    return b;
}

void ComembershipAccumulator::add(std::span<const int> labels) {
    if (labels.size() != n_) throw std::invalid_argument("label vector length does not match accumulator");
    for (std::size_t i = 0; i < n_; ++i) {
        const int zi = labels[i];
        std::uint32_t* row = counts_.data() + i * n_;
        for (std::size_t j = 0; j < n_; ++j) row[j] += labels[j] == zi ? 1u : 0u;
    }
    ++m_;
}

Eigen::MatrixXd ComembershipAccumulator::mean() const {
    const auto n = static_cast<Eigen::Index>(n_);
    Eigen::MatrixXd b(n, n);
    const double inv = m_ > 0 ? 1.0 / static_cast<double>(m_) : 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            b(i, j) = static_cast<double>(counts_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)]) * inv;
    return b;
}

std::int64_t ComembershipAccumulator::scaled_loss(std::span<const int> labels) const {
    const auto m = static_cast<std::int64_t>(m_);
    std::int64_t loss = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        const std::uint32_t* row = counts_.data() + i * n_;
        for (std::size_t j = i + 1; j < n_; ++j) {
            const std::int64_t d = (labels[i] == labels[j] ? m : 0) - static_cast<std::int64_t>(row[j]);
            loss += d * d;
        }
    }
    return 2 * loss;
}

namespace {

template <class GetLabels>
DahlResult dahl_impl(std::size_t m, std::size_t n, GetLabels&& get) {
    if (m == 0) throw std::invalid_argument("dahl_select needs at least one sample");
    ComembershipAccumulator acc(n);
    for (std::size_t t = 0; t < m; ++t) acc.add(get(t));
    DahlResult out;
    std::int64_t best = -1;
    for (std::size_t t = 0; t < m; ++t) {
        const std::int64_t loss = acc.scaled_loss(get(t));
        if (best < 0 || loss < best) {
            best = loss;
            out.index = t;
        }
    }
    out.mean_comembership = acc.mean();
    return out;
}

}  // namespace

DahlResult dahl_select(std::span<const std::vector<int>> label_samples) {
    const std::size_t n = label_samples.empty() ? 0 : label_samples.front().size();
    return dahl_impl(label_samples.size(), n,
                     [&](std::size_t t) { return std::span<const int>(label_samples[t]); });
}

DahlResult dahl_select(std::span<const ChainSample> samples) {
    const std::size_t n = samples.empty() ? 0 : samples.front().labels.size();
    return dahl_impl(samples.size(), n, [&](std::size_t t) { return std::span<const int>(samples[t].labels); });
}

UncertaintyScores uncertainty_scores(const Eigen::MatrixXd& mean_comembership, const Partition& point) {
    const std::size_t n = point.n();
    if (static_cast<std::size_t>(mean_comembership.rows()) != n)
        throw std::invalid_argument("co-membership matrix size does not match the partition");
    const int k = point.k();
    UncertaintyScores out;
    out.uncertainty.resize(n);
    out.assigned_affinity.resize(n);
    out.singleton.resize(n);
    std::vector<double> sums(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sums[static_cast<std::size_t>(point.labels[j])] +=
                mean_comembership(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
        const int own = point.labels[i];
        double best = 0.0;
        for (int c = 0; c < k; ++c) {
            const auto uc = static_cast<std::size_t>(c);
            const int members = point.occupancy[uc] - (c == own ? 1 : 0);
            const double aff = members > 0 ? sums[uc] / static_cast<double>(members) : 0.0;
            if (c == own) {
                out.assigned_affinity[i] = aff;
                out.singleton[i] = members == 0;
            }
            best = std::max(best, aff);
        }
        out.uncertainty[i] = std::clamp(1.0 - best, 0.0, 1.0);
    }
    return out;
}

PosteriorSummary summarize(std::span<const ChainSample> samples) {
    DahlResult dahl = dahl_select(samples);
    PosteriorSummary s;
    s.dahl_index = dahl.index;
    s.point_partition = Partition::from_labels(samples[dahl.index].labels);
    s.scores = uncertainty_scores(dahl.mean_comembership, s.point_partition);
    s.mean_comembership = std::move(dahl.mean_comembership);
    s.k_hat = s.point_partition.k();
    s.n_samples = samples.size();
    return s;
}

}  // namespace baysc
