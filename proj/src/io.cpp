#include "baysc/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "baysc/errors.hpp"

namespace baysc::io {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        std::size_t start = 0;
        while (start < field.size() && field[start] == ' ') ++start;
        out.push_back(field.substr(start));
    }
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const char* begin = s.data();
    if (*begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::ifstream open_in(const std::string& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw InputFormatError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw InputFormatError("cannot open '" + path + "' for writing");
    return out;
}

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& what) {
    throw InputFormatError(path + ":" + std::to_string(line) + ": " + what);
}

bool all_numeric(const std::vector<std::string>& fields, std::size_t from) {
    for (std::size_t k = from; k < fields.size(); ++k)
        if (!parse_double(fields[k])) return false;
    return true;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::vector<std::string> index_ids(std::size_t n) {
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i);
    return ids;
}

NumericTable read_numeric_csv(const std::string& path, bool row_ids) {
    auto in = open_in(path);
    NumericTable t;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    const std::size_t first = row_ids ? 1 : 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split(line, ',');
        if (rows.empty() && t.header.empty() && !all_numeric(fields, first)) {
            t.header = fields;
            continue;
        }
        if (fields.size() <= first) fail(path, line_no, "row has no values");
        const std::size_t w = fields.size() - first;
        if (width == 0) width = w;
        if (w != width)
            fail(path, line_no, "expected " + std::to_string(width) + " values, found " + std::to_string(w));
        std::vector<double> row(w);
        for (std::size_t k = 0; k < w; ++k) {
            auto v = parse_double(fields[k + first]);
            if (!v) fail(path, line_no, "field " + std::to_string(k + first + 1) + " is not a number: '" + fields[k + first] + "'");
            row[k] = *v;
        }
        if (row_ids) t.row_ids.push_back(fields[0]);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputFormatError(path + ": no data rows");
    t.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j)
            t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return t;
}

void write_numeric_csv(const std::string& path, const Eigen::MatrixXd& values, const std::vector<std::string>& row_ids,
                       const std::vector<std::string>& header) {
    auto out = open_out(path);
    if (!header.empty()) {
        for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
        out << '\n';
    }
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        bool first = true;
        if (!row_ids.empty()) {
            out << row_ids[static_cast<std::size_t>(i)];
            first = false;
        }
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            out << (first ? "" : ",") << format_double(values(i, j));
            first = false;
        }
        out << '\n';
    }
}

CoordinateTable read_coordinates_csv(const std::string& path) {
    const NumericTable t = read_numeric_csv(path, true);
    if (t.values.cols() != 2) throw InputFormatError(path + ": expected columns cell_id, x, y");
    CoordinateTable out;
    out.cell_ids = t.row_ids;
    out.coords.positions = t.values;
    for (Eigen::Index i = 0; i < t.values.rows(); ++i)
        if (!std::isfinite(t.values(i, 0)) || !std::isfinite(t.values(i, 1)))
            throw InputFormatError(path + ": non-finite coordinate for cell " + out.cell_ids[static_cast<std::size_t>(i)]);
    return out;
}

void write_coordinates_csv(const std::string& path, const CoordinateTable& table) {
    write_numeric_csv(path, table.coords.positions, table.cell_ids, {"cell_id", "x", "y"});
}

LabelTable read_labels_tsv(const std::string& path) {
    auto in = open_in(path);
    LabelTable t;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    bool has_unc = false;
    std::vector<double> unc;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split(line, '\t');
        if (!header_seen) {
            header_seen = true;
            if (fields.size() < 2) fail(path, line_no, "header needs at least cell_id and domain columns");
            has_unc = fields.size() >= 3 && fields[2] == "uncertainty";
            continue;
        }
        if (fields.size() < (has_unc ? 3u : 2u)) fail(path, line_no, "too few columns");
        int domain = 0;
        auto [ptr, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), domain);
        if (ec != std::errc() || ptr != fields[1].data() + fields[1].size())
            fail(path, line_no, "domain is not an integer: '" + fields[1] + "'");
        t.cell_ids.push_back(fields[0]);
        t.domains.push_back(domain);
        if (has_unc) {
            auto v = parse_double(fields[2]);
            if (!v) fail(path, line_no, "uncertainty is not a number: '" + fields[2] + "'");
            unc.push_back(*v);
        }
    }
    if (t.domains.empty()) throw InputFormatError(path + ": no label rows");
    if (has_unc) t.uncertainty = std::move(unc);
    return t;
}

void write_labels_tsv(const std::string& path, const LabelTable& table) {
    auto out = open_out(path);
    out << "cell_id\tdomain" << (table.uncertainty ? "\tuncertainty" : "") << '\n';
    for (std::size_t i = 0; i < table.domains.size(); ++i) {
        out << table.cell_ids[i] << '\t' << table.domains[i];
        if (table.uncertainty) out << '\t' << format_double((*table.uncertainty)[i]);
        out << '\n';
    }
}

void write_matrix_bin(const std::string& path, const Eigen::MatrixXd& m, const std::array<char, 8>& magic) {
    if (m.rows() != m.cols()) throw std::invalid_argument("binary matrix files hold square matrices");
    auto out = open_out(path, true);
    out.write(magic.data(), 8);
    const auto n = static_cast<std::uint64_t>(m.rows());
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double v = m(i, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
    if (!out) throw InputFormatError("failed writing '" + path + "'");
}

Eigen::MatrixXd read_matrix_bin(const std::string& path, const std::array<char, 8>& magic) {
    auto in = open_in(path, true);
    std::array<char, 8> got{};
    std::uint64_t n = 0;
    in.read(got.data(), 8);
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    if (!in) throw InputFormatError(path + ": truncated header");
    if (got != magic) throw InputFormatError(path + ": bad magic (expected " + std::string(magic.data(), 8) + ")");
    if (n > (1u << 20)) throw InputFormatError(path + ": implausible matrix size " + std::to_string(n));
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<double> row(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(n * sizeof(double)));
        if (!in) throw InputFormatError(path + ": truncated data at row " + std::to_string(i));
        for (std::uint64_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
    }
    return m;
}

void write_similarity_bin(const std::string& path, const SimilarityMatrix& a) {
    write_matrix_bin(path, a.values, kSimilarityMagic);
}

SimilarityMatrix read_similarity_bin(const std::string& path, int modality_id) {
    SimilarityMatrix a;
    a.values = read_matrix_bin(path, kSimilarityMagic);
    a.modality_id = modality_id;
    for (Eigen::Index i = 0; i < a.values.rows(); ++i)
        for (Eigen::Index j = 0; j < a.values.cols(); ++j)
            if (!std::isfinite(a.values(i, j)))
                throw NumericError(path + ": non-finite similarity at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    return a;
}

void write_edge_list(const std::string& path, const NeighborhoodGraph& graph, const std::vector<std::string>& ids) {
    auto out = open_out(path);
    out << "cell_i\tcell_j\n";
    for (std::size_t i = 0; i < graph.n(); ++i)
        for (auto j : graph.neighbors(i))
            if (j > i) out << ids[i] << '\t' << ids[j] << '\n';
}

std::string sha256_file(const std::string& path) {
    auto in = open_in(path, true);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    static constexpr char hex[] = "0123456789abcdef";
    std::string s;
    for (unsigned int k = 0; k < len; ++k) {
        s += hex[md[k] >> 4];
        s += hex[md[k] & 0xF];
    }
    return s;
}

}  // namespace baysc::io
