#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "baysc/eval_metrics.hpp"
#include "baysc/synthetic_bench.hpp"

using namespace baysc;

namespace {

struct Moments {
    double count = 0, mean = 0, var = 0;
};

// Off-diagonal entries grouped by whether both cells share a truth band.
Moments block_moments(const SyntheticData& d, bool within) {
    const auto& a = d.similarities[0].values;
    const auto& z = d.truth.labels;
    Moments m;
    double s = 0, ss = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = i + 1; j < a.cols(); ++j)
            if ((z[i] == z[j]) == within) {
                s += a(i, j);
                ss += a(i, j) * a(i, j);
                m.count += 1;
            }
    m.mean = s / m.count;
    m.var = ss / m.count - m.mean * m.mean;
    return m;
}

}  // namespace

TEST_CASE("bands and occupancies") {
    SyntheticSpec spec;
    const SyntheticData d = generate_spatial_sbm(spec);
    CHECK(d.truth.occupancy == std::vector<int>{48, 48, 48});
    CHECK(d.coords.n() == 144);
    for (int i = 0; i < 144; ++i) CHECK(d.truth.labels[i] == static_cast<int>(d.coords.positions(i, 0)) / 4);
    CHECK_NOTHROW(d.truth.validate());
}

TEST_CASE("similarity invariants") {
    SyntheticSpec spec;
    spec.n_modalities = 2;
    const SyntheticData d = generate_spatial_sbm(spec);
    REQUIRE(d.similarities.size() == 2);
    const double lim = std::atanh(kSimilarityClip);
    for (const auto& s : d.similarities) {
        CHECK(s.values.allFinite());
        CHECK((s.values - s.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(s.values.cwiseAbs().maxCoeff() <= lim);
        CHECK((s.values.diagonal().array() == lim).all());
    }
    CHECK((d.similarities[0].values - d.similarities[1].values).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("single block: sample mean within 3 sd / sqrt(count)") {
    SyntheticSpec spec;
    spec.k_true = 1;
    spec.mu_within = 0.4;
    spec.precision = 4.0;
    spec.seed = 11;
    const Moments m = block_moments(generate_spatial_sbm(spec), true);
    CHECK(std::abs(m.mean - 0.4) < 3.0 * 0.5 / std::sqrt(m.count));
}

TEST_CASE("block moments converge to the generator settings (4 sd)") {
    for (int side : {12, 20}) {
        SyntheticSpec spec;
        spec.grid_side = side;
        spec.k_true = 2;
        spec.mu_within = 0.8;
        spec.mu_between = -0.1;
        spec.precision = 9.0;
        const SyntheticData d = generate_spatial_sbm(spec);
        const double var = 1.0 / 9.0;
        for (bool within : {true, false}) {
            const Moments m = block_moments(d, within);
            const double mu = within ? 0.8 : -0.1;
            CHECK(std::abs(m.mean - mu) < 4.0 * std::sqrt(var / m.count));
            // sd of the sample variance of normals: var * sqrt(2 / count)
            CHECK(std::abs(m.var - var) < 4.0 * var * std::sqrt(2.0 / m.count));
        }
    }
}

TEST_CASE("determinism") {
    SyntheticSpec spec;
    spec.seed = 42;
    const SyntheticData a = generate_spatial_sbm(spec), b = generate_spatial_sbm(spec);
    CHECK(a.similarities[0].values == b.similarities[0].values);
    spec.seed = 43;
    CHECK(generate_spatial_sbm(spec).similarities[0].values != a.similarities[0].values);
}

TEST_CASE("non-spatial null") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SyntheticSpec spec;
        spec.seed = seed;
        const SyntheticData s = generate_spatial_sbm(spec);
        const SyntheticData z = generate_nonspatial_null(spec);
        CHECK(z.similarities[0].values == s.similarities[0].values);
        CHECK(z.truth.labels == s.truth.labels);
        CHECK(z.coords.positions != s.coords.positions);
        // same set of locations
        std::vector<std::pair<double, double>> p1, p2;
        for (int i = 0; i < 144; ++i) {
            p1.emplace_back(s.coords.positions(i, 0), s.coords.positions(i, 1));
            p2.emplace_back(z.coords.positions(i, 0), z.coords.positions(i, 1));
        }
        std::sort(p1.begin(), p1.end());
        std::sort(p2.begin(), p2.end());
        CHECK(p1 == p2);

        const double spatial = morans_i(s.truth.labels, build_neighborhood(s.coords, 1.0));
        const double shuffled = morans_i(z.truth.labels, build_neighborhood(z.coords, 1.0));
        CHECK(spatial > 0.8);
        CHECK(std::abs(shuffled) < 0.1);
    }
}

TEST_CASE("SyntheticSpec validation") {
    SyntheticSpec spec;
    spec.mu_within = 0.0;
    CHECK_THROWS_AS(generate_spatial_sbm(spec), std::invalid_argument);
    spec = SyntheticSpec{};
    spec.precision = 0.0;
    CHECK_THROWS_AS(generate_spatial_sbm(spec), std::invalid_argument);
    spec = SyntheticSpec{};
    spec.k_true = 13;
    CHECK_THROWS_AS(generate_spatial_sbm(spec), std::invalid_argument);
}
