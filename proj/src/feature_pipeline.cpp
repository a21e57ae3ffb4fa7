#include "baysc/feature_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace baysc {

ModalityKind parse_modality_kind(const std::string& name) {
    if (name == "rna") return ModalityKind::rna;
    if (name == "atac") return ModalityKind::atac;
    if (name == "adt") return ModalityKind::adt;
    throw std::invalid_argument("unknown modality kind '" + name + "' (expected rna, atac or adt)");
}

std::string to_string(ModalityKind kind) {
    switch (kind) {
        case ModalityKind::rna: return "rna";
        case ModalityKind::atac: return "atac";
        case ModalityKind::adt: return "adt";
    }
    return "?";
}

int default_components(ModalityKind kind) {
    return kind == ModalityKind::adt ? 30 : 50;
}

void CountMatrix::validate() const {
    if (values.rows() < 2 || values.cols() < 2)
        throw std::invalid_argument("count matrix must have at least 2 cells and 2 features");
    for (Eigen::Index i = 0; i < values.rows(); ++i)
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            const double v = values(i, j);
            if (!std::isfinite(v) || v < 0.0)
                throw std::invalid_argument("count matrix entry (" + std::to_string(i) + ", " +
                                            std::to_string(j) + ") is negative or non-finite");
        }
}

namespace {

void require_kind(const CountMatrix& counts, ModalityKind kind) {
    if (counts.kind != kind)
        throw std::invalid_argument("expected " + to_string(kind) + " counts, got " + to_string(counts.kind));
}

void require_nonempty_rows(const Eigen::MatrixXd& x) {
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        if (!(x.row(i).sum() > 0.0))
            throw std::invalid_argument("cell " + std::to_string(i) + " has zero total count");
}

void check_components(int n_components, Eigen::Index limit) {
    if (n_components < 1 || n_components > limit)
        throw std::invalid_argument("n_components = " + std::to_string(n_components) + " outside [1, " +
                                    std::to_string(limit) + "]");
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> loading, Eigen::Ref<Eigen::VectorXd> scores) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index k = 0; k < loading.size(); ++k) {
        if (std::abs(loading(k)) > best) {
            best = std::abs(loading(k));
            arg = k;
        }
    }
    if (loading.size() > 0 && loading(arg) < 0.0) {
        loading = -loading;
        scores = -scores;
    }
}

// Eigen-decomposes the smaller of X^T X and X X^T and returns the leading
// `n_keep` directions. `scale` divides the Gram matrix (n-1 for PCA, 1 for SVD).
Embedding leading_directions(const Eigen::MatrixXd& x, int n_keep, double scale) {
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    Embedding out;
    out.values.resize(n, n_keep);
    out.component_variance.resize(n_keep);

    if (p <= n) {
        const Eigen::MatrixXd gram = (x.transpose() * x) / scale;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
        for (int c = 0; c < n_keep; ++c) {
            const Eigen::Index idx = p - 1 - c;
            Eigen::VectorXd v = es.eigenvectors().col(idx);
            Eigen::VectorXd s = x * v;
            fix_sign(v, s);
            out.values.col(c) = s;
            out.component_variance[c] = std::max(0.0, es.eigenvalues()(idx));
        }
    } else {
        const Eigen::MatrixXd gram = (x * x.transpose()) / scale;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
        for (int c = 0; c < n_keep; ++c) {
            const Eigen::Index idx = n - 1 - c;
            const double lambda = std::max(0.0, es.eigenvalues()(idx));
            const Eigen::VectorXd u = es.eigenvectors().col(idx);
            Eigen::VectorXd v = x.transpose() * u;
            const double norm = v.norm();
            Eigen::VectorXd s;
            if (norm > 0.0) {
                v /= norm;
                s = x * v;
            } else {
                s = Eigen::VectorXd::Zero(n);
            }
            fix_sign(v, s);
            out.values.col(c) = s;
            out.component_variance[c] = lambda;
        }
    }
    return out;
}

}  // namespace

namespace detail {

Eigen::MatrixXd log_normalize(const Eigen::MatrixXd& counts, double target, bool log2) {
    const Eigen::VectorXd sums = counts.rowwise().sum();
    if (!(target > 0.0)) {
        std::vector<double> s(sums.data(), sums.data() + sums.size());
        std::sort(s.begin(), s.end());
        const std::size_t m = s.size();
        target = (m % 2 == 1) ? s[m / 2] : 0.5 * (s[m / 2 - 1] + s[m / 2]);
    }
    Eigen::MatrixXd out(counts.rows(), counts.cols());
    for (Eigen::Index i = 0; i < counts.rows(); ++i) {
        const double f = target / sums(i);
        for (Eigen::Index j = 0; j < counts.cols(); ++j) {
            const double y = std::log1p(counts(i, j) * f);
            out(i, j) = log2 ? y / std::log(2.0) : y;
        }
    }
    return out;
}

Eigen::MatrixXd zscore_columns(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd out(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double mean = x.col(j).mean();
        const Eigen::VectorXd centered = x.col(j).array() - mean;
        const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(n - 1));
        if (sd > 1e-12 * std::max(1.0, std::abs(mean)))
            out.col(j) = centered / sd;
        else
            out.col(j).setZero();
    }
    return out;
}

Eigen::MatrixXd clr_rows(const Eigen::MatrixXd& counts) {
    Eigen::MatrixXd y = counts.unaryExpr([](double v) { return std::log1p(v); });
    for (Eigen::Index i = 0; i < y.rows(); ++i) y.row(i).array() -= y.row(i).mean();
    return y;
}

Eigen::MatrixXd tfidf(const Eigen::MatrixXd& counts, int* dropped_columns) {
    const Eigen::Index n = counts.rows();
    std::vector<Eigen::Index> keep;
    std::vector<double> df;
    for (Eigen::Index j = 0; j < counts.cols(); ++j) {
        double d = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) d += counts(i, j) > 0.0 ? 1.0 : 0.0;
        if (d > 0.0) {
            keep.push_back(j);
            df.push_back(d);
        }
    }
    if (keep.empty()) throw std::invalid_argument("ATAC count matrix is all zero");
    if (dropped_columns) *dropped_columns = static_cast<int>(counts.cols() - keep.size());

    Eigen::MatrixXd out(n, static_cast<Eigen::Index>(keep.size()));
    for (Eigen::Index i = 0; i < n; ++i) {
        double row_total = 0.0;
        for (auto j : keep) row_total += counts(i, j) > 0.0 ? 1.0 : 0.0;
        for (std::size_t k = 0; k < keep.size(); ++k) {
            const double b = counts(i, keep[k]) > 0.0 ? 1.0 : 0.0;
            const double tf = row_total > 0.0 ? b / row_total : 0.0;
            const double idf = std::log(1.0 + static_cast<double>(n) / (1.0 + df[k]));
            out(i, static_cast<Eigen::Index>(k)) = tf * idf;
        }
    }
    return out;
}

Embedding principal_components(const Eigen::MatrixXd& centered, int n_components) {
    return leading_directions(centered, n_components, static_cast<double>(centered.rows() - 1));
}

Embedding truncated_svd(const Eigen::MatrixXd& x, int n_keep) {
    return leading_directions(x, n_keep, 1.0);
}

}  // namespace detail

Embedding rna_frontend(const CountMatrix& counts, int n_components, const RnaOptions& opts) {
    require_kind(counts, ModalityKind::rna);
    counts.validate();
    require_nonempty_rows(counts.values);

    Eigen::MatrixXd x = counts.values;
    if (!opts.feature_mask.empty()) {
        if (static_cast<Eigen::Index>(opts.feature_mask.size()) != x.cols())
            throw std::invalid_argument("feature mask length does not match feature count");
        std::vector<Eigen::Index> cols;
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            if (opts.feature_mask[j]) cols.push_back(j);
        if (cols.size() < 2) throw std::invalid_argument("feature mask keeps fewer than 2 features");
        x = counts.values(Eigen::all, cols);
        require_nonempty_rows(x);
    }
    check_components(n_components, std::min(x.rows() - 1, x.cols()));

    const Eigen::MatrixXd z = detail::zscore_columns(detail::log_normalize(x, opts.library_size_target, opts.log2));
    return detail::principal_components(z, n_components);
}

Embedding atac_frontend(const CountMatrix& counts, int n_components) {
    require_kind(counts, ModalityKind::atac);
    counts.validate();
    int dropped = 0;
    const Eigen::MatrixXd x = detail::tfidf(counts.values, &dropped);
    check_components(n_components, std::min(x.rows(), x.cols()) - 1);

    Embedding full = detail::truncated_svd(x, n_components + 1);
    Embedding out;
    out.values = full.values.rightCols(n_components);
    out.component_variance.assign(full.component_variance.begin() + 1, full.component_variance.end());
    out.dropped_columns = dropped;
    return out;
}

Embedding adt_frontend(const CountMatrix& counts, int n_components) {
    require_kind(counts, ModalityKind::adt);
    counts.validate();
    require_nonempty_rows(counts.values);
    check_components(n_components, std::min(counts.values.rows() - 1, counts.values.cols()));

    Eigen::MatrixXd y = detail::clr_rows(counts.values);
    const Eigen::RowVectorXd means = y.colwise().mean();
    y.rowwise() -= means;
    return detail::principal_components(y, n_components);
}

Embedding embed_counts(const CountMatrix& counts, int n_components) {
    switch (counts.kind) {
        case ModalityKind::rna: return rna_frontend(counts, n_components);
        case ModalityKind::atac: return atac_frontend(counts, n_components);
        case ModalityKind::adt: return adt_frontend(counts, n_components);
    }
    throw std::invalid_argument("unknown modality kind");
}

Embedding standardize_cells(const Embedding& emb) {
    const Eigen::Index d = emb.dim();
    if (d < 2) throw std::invalid_argument("standardize_cells needs at least 2 embedding dimensions");
    Embedding out = emb;
    out.degenerate_rows.assign(static_cast<std::size_t>(emb.n_cells()), false);
    for (Eigen::Index i = 0; i < emb.n_cells(); ++i) {
        const auto row = emb.values.row(i);
        const double mean = row.mean();
        const Eigen::RowVectorXd centered = row.array() - mean;
        const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(d - 1));
        const double scale = std::max(1.0, row.cwiseAbs().maxCoeff());
        if (!(sd > 1e-12 * scale)) {
            out.values.row(i).setZero();
            out.degenerate_rows[static_cast<std::size_t>(i)] = true;
        } else {
            out.values.row(i) = centered / sd;
        }
    }
    return out;
}

}  // namespace baysc
