#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "baysc/errors.hpp"
#include "baysc/io.hpp"
#include "baysc/render.hpp"

using namespace baysc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("baysc_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream(path) << text;
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t c = 0;
    for (std::size_t pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++c;
    return c;
}

}  // namespace

TEST_CASE("format_double round-trips") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd(0.0, 1e3);
    for (int t = 0; t < 1000; ++t) {
        const double v = nd(rng) * std::pow(10.0, t % 20 - 10);
        CHECK(std::stod(io::format_double(v)) == v);
    }
    CHECK(io::format_double(0.5) == "0.5");
    CHECK(io::format_double(2.0) == "2");
}

TEST_CASE("numeric CSV round trip, header and id detection") {
    TempDir dir;
    Eigen::MatrixXd m(3, 2);
    m << 1.5, -2.25, 1e-17, 3.0, 0.1, 1.0 / 3.0;
    io::write_numeric_csv(dir.file("m.csv"), m, {"a", "b", "c"}, {"cell_id", "x", "y"});
    const io::NumericTable t = io::read_numeric_csv(dir.file("m.csv"), true);
    CHECK(t.values == m);
    CHECK(t.row_ids == std::vector<std::string>{"a", "b", "c"});
    CHECK(t.header.size() == 3);

    io::write_numeric_csv(dir.file("plain.csv"), m);
    CHECK(io::read_numeric_csv(dir.file("plain.csv")).values == m);
}

TEST_CASE("malformed CSV names the line") {
    TempDir dir;
    write_text(dir.file("bad.csv"), "cell_id,x,y\nc1,1,2\nc2,1,oops\n");
    CHECK_THROWS_WITH_AS(io::read_numeric_csv(dir.file("bad.csv"), true), doctest::Contains(":3:"), InputFormatError);
    write_text(dir.file("ragged.csv"), "1,2\n3\n");
    CHECK_THROWS_AS(io::read_numeric_csv(dir.file("ragged.csv")), InputFormatError);
    CHECK_THROWS_AS(io::read_numeric_csv(dir.file("missing.csv")), InputFormatError);
}

TEST_CASE("coordinates and labels round trip") {
    TempDir dir;
    io::CoordinateTable c;
    c.cell_ids = {"s1", "s2", "s3"};
    c.coords.positions.resize(3, 2);
    c.coords.positions << 0.5, 1.0, 2.0, 3.25, -1.0, 0.0;
    io::write_coordinates_csv(dir.file("coords.csv"), c);
    const io::CoordinateTable c2 = io::read_coordinates_csv(dir.file("coords.csv"));
    CHECK(c2.cell_ids == c.cell_ids);
    CHECK(c2.coords.positions == c.coords.positions);

    io::LabelTable l;
    l.cell_ids = c.cell_ids;
    l.domains = {1, 2, 1};
    l.uncertainty = std::vector<double>{0.0, 0.125, 1.0 / 7.0};
    io::write_labels_tsv(dir.file("labels.tsv"), l);
    const io::LabelTable l2 = io::read_labels_tsv(dir.file("labels.tsv"));
    CHECK(l2.cell_ids == l.cell_ids);
    CHECK(l2.domains == l.domains);
    REQUIRE(l2.uncertainty.has_value());
    CHECK(*l2.uncertainty == *l.uncertainty);

    l.uncertainty.reset();
    io::write_labels_tsv(dir.file("plain.tsv"), l);
    CHECK_FALSE(io::read_labels_tsv(dir.file("plain.tsv")).uncertainty.has_value());

    write_text(dir.file("bad.tsv"), "cell_id\tdomain\na\t1\nb\tx\n");
    CHECK_THROWS_WITH_AS(io::read_labels_tsv(dir.file("bad.tsv")), doctest::Contains(":3:"), InputFormatError);
}

TEST_CASE("binary matrices") {
    TempDir dir;
    SimilarityMatrix a;
    a.values = Eigen::MatrixXd::Random(5, 5);
    io::write_similarity_bin(dir.file("a.bin"), a);
    CHECK(fs::file_size(dir.file("a.bin")) == 16 + 25 * 8);
    CHECK(io::read_similarity_bin(dir.file("a.bin")).values == a.values);
    CHECK_THROWS_AS(io::read_matrix_bin(dir.file("a.bin"), io::kComembershipMagic), InputFormatError);
    fs::resize_file(dir.file("a.bin"), 16 + 10 * 8);
    CHECK_THROWS_AS(io::read_similarity_bin(dir.file("a.bin")), InputFormatError);
}

TEST_CASE("sha256 and edge list") {
    TempDir dir;
    write_text(dir.file("abc.txt"), "abc");
    CHECK(io::sha256_file(dir.file("abc.txt")) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

    NeighborhoodGraph g(3, 1.0);
    g.add_edge(0, 2);
    g.add_edge(1, 2);
    io::write_edge_list(dir.file("g.tsv"), g, {"x", "y", "z"});
    std::ifstream in(dir.file("g.tsv"));
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(all == "cell_i\tcell_j\nx\tz\ny\tz\n");
    CHECK(io::index_ids(3) == std::vector<std::string>{"0", "1", "2"});
}

TEST_CASE("SVG rendering") {
    Coordinates c;
    c.positions.resize(4, 2);
    c.positions << 0, 0, 1, 0, 0, 1, 1, 1;
    const std::vector<int> d{1, 1, 2, 3};
    const std::string one = render_domain_svg(c, d, std::nullopt);
    CHECK(count(one, "<circle") == 4);
    CHECK(one.rfind("<svg", 0) == 0);
    CHECK(one.find("</svg>") != std::string::npos);
    CHECK(one.find("log10-uncertainty") == std::string::npos);
    CHECK(one.find(domain_color(2)) != std::string::npos);

    const std::string two = render_domain_svg(c, d, std::vector<double>{0.0, 0.01, 0.5, 1.0});
    CHECK(count(two, "<circle") == 8);
    CHECK(two.find("log10-uncertainty") != std::string::npos);
    CHECK(two == render_domain_svg(c, d, std::vector<double>{0.0, 0.01, 0.5, 1.0}));

    CHECK(domain_color(1) != domain_color(2));
    CHECK(domain_color(1) == domain_color(21));
    CHECK_THROWS_AS(render_domain_svg(c, std::vector<int>{1}, std::nullopt), std::invalid_argument);
}
