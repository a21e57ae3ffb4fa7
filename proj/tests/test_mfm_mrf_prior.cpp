#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "baysc/mfm_mrf_prior.hpp"
#include "oracles/oracles.hpp"

using namespace baysc;

namespace {

NeighborhoodGraph grid_graph(int side, double delta) {
    Coordinates c;
    c.positions.resize(side * side, 2);
    for (int r = 0; r < side; ++r)
        for (int col = 0; col < side; ++col) c.positions.row(r * side + col) << col, r;
    return build_neighborhood(c, delta);
}

}  // namespace

TEST_CASE("log V_1(1) = 0 for gamma = 1") {
    CHECK(std::abs(log_vn_series(1, 1.0, 1)) < 1e-12);
    MfmPrior m(1, 1.0);
    CHECK(std::abs(m.log_vn(1)) < 1e-12);
}

TEST_CASE("truncated Poisson pmf sums to one") {
    double total = 0.0;
    for (int k = 1; k < 40; ++k) total += std::exp(log_truncated_poisson1(k));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(log_truncated_poisson1(1) == doctest::Approx(-1.0 - std::log1p(-std::exp(-1.0))));
}

TEST_CASE("deflation: V_n(t+1) < V_n(t)") {
    for (int n : {2, 10, 50, 100, 500}) {
        for (double gamma : {0.5, 1.0, 2.0}) {
            MfmPrior m(n, gamma);
            const int top = std::min(n, 20);
            for (int t = 1; t < top; ++t) {
                CHECK(std::isfinite(m.log_vn(t)));
                CHECK(m.log_vn(t + 1) < m.log_vn(t));
            }
        }
    }
}

TEST_CASE("table matches the 50-digit series oracle") {
    for (int n : {1, 2, 5, 10, 50, 100}) {
        MfmPrior m(n, 1.0);
        for (int t = 1; t <= std::min(n, 15); ++t) {
            const double ref = oracle::log_vn_multiprecision(n, 1.0, t);
            CHECK(std::abs(m.log_vn(t) - ref) <= 1e-10 * std::abs(ref) + 1e-12);
        }
    }
    MfmPrior g(30, 0.37);
    for (int t = 1; t <= 10; ++t) {
        const double ref = oracle::log_vn_multiprecision(30, 0.37, t);
        CHECK(std::abs(g.log_vn(t) - ref) <= 1e-10 * std::abs(ref) + 1e-12);
    }
}

TEST_CASE("truncation robustness: tighter tolerance changes nothing beyond 1e-10") {
    for (int n : {10, 100, 400}) {
        for (int t : {1, 3, 8}) {
            int cap = 0, cap_tight = 0;
            const double v = log_vn_series(n, 1.0, t, &cap);
            const double tight = log_vn_series(n, 1.0, t, &cap_tight, 1e-30);
            CHECK(cap_tight >= cap);
            CHECK(std::abs(v - tight) <= 1e-10 * std::max(1.0, std::abs(v)));
        }
    }
}

TEST_CASE("table extends on demand and rejects t < 1") {
    MfmPrior m(200, 1.0, 5);
    CHECK(m.t_max() == 5);
    const double v = m.log_vn(30);
    CHECK(m.t_max() >= 30);
    CHECK(v == doctest::Approx(log_vn_series(200, 1.0, 30)).epsilon(1e-12));
    CHECK_THROWS_AS(m.log_vn(0), std::out_of_range);
    // t beyond n is still a well-defined series term
    CHECK(m.log_vn(201) < m.log_vn(200));
    CHECK(MfmPrior(5, 1.0, 8).t_max() == 8);
    CHECK_THROWS_AS(MfmPrior(5, 0.0), std::invalid_argument);
}

TEST_CASE("urn weights") {
    CHECK(urn_log_weight_existing(1, 1.0) == doctest::Approx(std::log(2.0)));
    CHECK(urn_log_weight_existing(9, 1.0) == doctest::Approx(std::log(10.0)));
    for (int c = 1; c < 50; ++c) CHECK(urn_log_weight_existing(c + 1, 0.7) > urn_log_weight_existing(c, 0.7));

    MfmPrior m(50, 1.0);
    const double ref = oracle::log_vn_multiprecision(50, 1.0, 2) - oracle::log_vn_multiprecision(50, 1.0, 1);
    CHECK(std::abs(urn_log_weight_new(1, m) - ref) < 1e-10);
    for (double gamma : {0.3, 1.0, 3.0}) {
        MfmPrior g(40, gamma);
        for (int k = 1; k < 20; ++k) CHECK(urn_log_weight_new(k, g) < std::log(gamma));
    }
}

TEST_CASE("mrf_log_reward") {
    // cell 4 is the centre of a 3x3 grid with neighbors 1, 3, 5, 7
    const NeighborhoodGraph g = grid_graph(3, 1.0);
    std::vector<int> z{0, 2, 0, 2, 1, 2, 0, 0, 0};
    CHECK(mrf_log_reward(z, g, 4, 2, 0.5) == doctest::Approx(1.5));
    CHECK(mrf_log_reward(z, g, 4, 0, 0.5) == doctest::Approx(0.5));
    CHECK(mrf_log_reward(z, g, 4, 1, 0.5) == 0.0);
    CHECK(mrf_log_reward(z, g, 4, -1, 0.5) == 0.0);
    for (int i = 0; i < 9; ++i)
        for (int c = 0; c < 3; ++c) CHECK(mrf_log_reward(z, g, i, c, 0.0) == 0.0);

    const NeighborhoodGraph empty = build_neighborhood(Coordinates{Eigen::MatrixX2d::Identity(2, 2) * 10.0}, 1.0);
    const std::vector<int> z2{0, 0};
    CHECK(mrf_log_reward(z2, empty, 0, 0, 3.0) == 0.0);
}

TEST_CASE("property: mrf reward is additive and invariant to relabeling other domains") {
    const NeighborhoodGraph g = grid_graph(5, 1.5);
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> z = oracle::random_labels(rng, 25, 4);
        const int i = trial % 25;
        const int c = trial % 4;
        double count = 0.0;
        for (auto j : g.neighbors(i)) count += z[j] == c ? 1.0 : 0.0;
        CHECK(mrf_log_reward(z, g, i, c, 0.8) == doctest::Approx(0.8 * count));
        // swap the names of two other domains
        const int a = (c + 1) % 4, b = (c + 2) % 4;
        std::vector<int> swapped = z;
        for (int& v : swapped) v = v == a ? b : v == b ? a : v;
        CHECK(mrf_log_reward(swapped, g, i, c, 0.8) == mrf_log_reward(z, g, i, c, 0.8));
    }
}

TEST_CASE("lambda_critical") {
    // 2x2 grid with delta = 1.5: complete graph K4, average degree 3
    const NeighborhoodGraph k4 = grid_graph(2, 1.5);
    CHECK(k4.avg_degree() == doctest::Approx(3.0));
    CHECK(lambda_critical(6, k4) == doctest::Approx(2.0));

    // a 4-regular graph: a ring of 8 cells with second neighbors
    NeighborhoodGraph ring(8, 1.0);
    for (std::size_t i = 0; i < 8; ++i) {
        ring.add_edge(i, (i + 1) % 8);
        ring.add_edge(i, (i + 2) % 8);
    }
    CHECK(ring.avg_degree() == doctest::Approx(4.0));
    CHECK(lambda_critical(8, ring) == doctest::Approx(2.0));

    // 14 edges on 8 cells: average degree 3.5
    NeighborhoodGraph mixed(8, 1.0);
    for (std::size_t i = 0; i < 8; ++i) mixed.add_edge(i, (i + 1) % 8);
    mixed.add_edge(0, 4);
    mixed.add_edge(2, 6);
    mixed.add_edge(1, 5);
    mixed.add_edge(3, 7);
    mixed.add_edge(0, 2);
    mixed.add_edge(4, 6);
    CHECK(mixed.avg_degree() == doctest::Approx(3.5));
    CHECK(lambda_critical(7, mixed) == doctest::Approx(2.0));

    const NeighborhoodGraph none(5, 1.0);
    CHECK(lambda_critical(3, none) == std::numeric_limits<double>::infinity());
}
