#pragma once
// Per-modality preprocessing: raw counts to standardized low-dimensional
// embeddings. RNA and ADT go through PCA, ATAC through TF-IDF + truncated
// SVD with the depth component removed.

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace baysc {

enum class ModalityKind { rna, atac, adt };

ModalityKind parse_modality_kind(const std::string& name);
std::string to_string(ModalityKind kind);

// Default retained dimensionality per modality.
int default_components(ModalityKind kind);

struct CountMatrix {
    Eigen::MatrixXd values;  // cells x features
    ModalityKind kind = ModalityKind::rna;

    // Throws std::invalid_argument on negative/non-finite entries or n, p < 2.
    void validate() const;
};

struct Embedding {
    Eigen::MatrixXd values;                 // cells x d
    std::vector<double> component_variance; // eigenvalues (PCA) or squared singular values (SVD), descending
    std::vector<bool> degenerate_rows;      // set by standardize_cells for zero-variance rows
    int dropped_columns = 0;                // all-zero features removed by the ATAC frontend

    Eigen::Index n_cells() const { return values.rows(); }
    Eigen::Index dim() const { return values.cols(); }
};

struct RnaOptions {
    // Row sums are scaled to this target; <= 0 means "median row sum".
    double library_size_target = 0.0;
    bool log2 = false;
    // Optional feature mask in place of highly-variable-gene selection.
    std::vector<bool> feature_mask;
};

Embedding rna_frontend(const CountMatrix& counts, int n_components, const RnaOptions& opts = {});
Embedding atac_frontend(const CountMatrix& counts, int n_components);
Embedding adt_frontend(const CountMatrix& counts, int n_components);

// Dispatches on counts.kind.
Embedding embed_counts(const CountMatrix& counts, int n_components);

// Row-wise z-score with ddof = 1. Zero-variance rows become all-zero and are
// flagged in degenerate_rows.
Embedding standardize_cells(const Embedding& emb);

namespace detail {

// Principal components of a column-centered matrix. Scores are returned
// ordered by decreasing variance; each loading vector's largest-magnitude
// entry is made positive.
Embedding principal_components(const Eigen::MatrixXd& centered, int n_components);

// Leading right singular structure of `x` (no centering). Returns the
// scores U*S for the first `n_keep` directions, same sign convention.
Embedding truncated_svd(const Eigen::MatrixXd& x, int n_keep);

Eigen::MatrixXd log_normalize(const Eigen::MatrixXd& counts, double target, bool log2);
Eigen::MatrixXd zscore_columns(const Eigen::MatrixXd& x);
Eigen::MatrixXd clr_rows(const Eigen::MatrixXd& counts);
Eigen::MatrixXd tfidf(const Eigen::MatrixXd& counts, int* dropped_columns);

}  // namespace detail

}  // namespace baysc
