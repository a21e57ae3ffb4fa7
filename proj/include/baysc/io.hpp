#pragma once
// File formats: CSV matrices and coordinates, TSV labels, flat binary
// matrices (16-byte header: 8-byte magic, uint64 n; then n*n little-endian
// float64, row-major).

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "baysc/similarity_graph.hpp"

namespace baysc::io {

inline constexpr std::array<char, 8> kSimilarityMagic{'B', 'A', 'Y', 'S', 'C', 'S', 'I', 'M'};
inline constexpr std::array<char, 8> kComembershipMagic{'B', 'A', 'Y', 'S', 'C', 'C', 'O', 'M'};

struct NumericTable {
    Eigen::MatrixXd values;
    std::vector<std::string> row_ids;  // empty unless the file has an id column
    std::vector<std::string> header;   // empty unless the file has a header row
};

// Header row is detected (any non-numeric field). With `row_ids` the first
// column is taken as cell ids. Malformed rows throw InputFormatError naming
// the line.
NumericTable read_numeric_csv(const std::string& path, bool row_ids = false);
void write_numeric_csv(const std::string& path, const Eigen::MatrixXd& values,
                       const std::vector<std::string>& row_ids = {}, const std::vector<std::string>& header = {});

struct CoordinateTable {
    std::vector<std::string> cell_ids;
    Coordinates coords;
};

// Columns: cell_id, x, y (header optional).
CoordinateTable read_coordinates_csv(const std::string& path);
void write_coordinates_csv(const std::string& path, const CoordinateTable& table);

struct LabelTable {
    std::vector<std::string> cell_ids;
    std::vector<int> domains;                 // as written in the file (1-based)
    std::optional<std::vector<double>> uncertainty;
};

// Columns: cell_id, domain[, uncertainty]; header row required.
LabelTable read_labels_tsv(const std::string& path);
void write_labels_tsv(const std::string& path, const LabelTable& table);

void write_matrix_bin(const std::string& path, const Eigen::MatrixXd& m, const std::array<char, 8>& magic);
Eigen::MatrixXd read_matrix_bin(const std::string& path, const std::array<char, 8>& magic);

void write_similarity_bin(const std::string& path, const SimilarityMatrix& a);
SimilarityMatrix read_similarity_bin(const std::string& path, int modality_id = 0);

// "i\tj" per undirected edge, using cell ids.
void write_edge_list(const std::string& path, const NeighborhoodGraph& graph, const std::vector<std::string>& ids);

// Shortest round-trippable decimal representation.
std::string format_double(double v);

std::string sha256_file(const std::string& path);

// Default ids "0", "1", ... when no id source exists.
std::vector<std::string> index_ids(std::size_t n);

}  // namespace baysc::io
