#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ploc/analytic.hpp"
#include "ploc/error.hpp"
#include "ploc/postprocess.hpp"
#include "ploc/synthetic.hpp"

using namespace ploc;

namespace {

FeatureHistogram counts(std::initializer_list<std::pair<int, std::uint64_t>> entries)
{
    FeatureHistogram h(16);
    for (auto [code, n] : entries) {
        h.counts[static_cast<std::size_t>(code)] = n;
        h.total += n;
    }
    return h;
}

FeatureVector random_vector(std::mt19937_64& gen, int bits)
{
    FeatureVector v;
    for (int k = 0; k < bits; ++k) {
        v[static_cast<std::size_t>(k)] = gen() & 1;
    }
    return v;
}

bool inside_box(const Point& p, int row, int col)
{
    return std::abs(p.m - row) <= 1 && std::abs(p.n - col) <= 1;
}

}  // namespace

TEST_CASE("significance on the mixed distribution")
{
    const auto h = counts({{12, 1}, {13, 1}, {14, 2}, {15, 2}});
    CHECK(significance_threshold(h, 0.2) == make_feature_set({14, 15}));
    CHECK(significance_threshold(h, 0.0) == make_feature_set({12, 13, 14, 15}));
    CHECK(significance_threshold(h, 1.0 / 6.0) == make_feature_set({12, 13, 14, 15}));
    CHECK(significance_threshold(h, 0.34).none());
}

TEST_CASE("significance edge cases")
{
    CHECK(significance_threshold(counts({{7, 5}}), 1.0) == make_feature_set({7}));
    CHECK(significance_threshold(counts({{7, 5}, {3, 1}}), 1.0).none());
    CHECK_THROWS_AS(significance_threshold(FeatureHistogram(16), 0.1), EmptyHistogramError);
    CHECK_THROWS_AS(significance_threshold(counts({{1, 1}}), -0.1), ConfigError);
    CHECK_THROWS_AS(significance_threshold(counts({{1, 1}}), 1.1), ConfigError);
}

TEST_CASE("raising theta_m never adds bits")
{
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 200; ++trial) {
        FeatureHistogram h(16);
        for (int k = 0; k < 16; ++k) {
            const auto n = gen() % 5;
            h.counts[static_cast<std::size_t>(k)] = n;
            h.total += n;
        }
        if (h.total == 0) {
            continue;
        }
        FeatureVector prev = significance_threshold(h, 0.0);
        for (double theta = 0.05; theta <= 1.0; theta += 0.05) {
            const auto cur = significance_threshold(h, theta);
            CHECK((cur & ~prev).none());
            prev = cur;
        }
    }
}

TEST_CASE("simulated significance matches the analytic levels")
{
    const double c = 500.0;
    const auto cell = test::make_n4_cell(c, test::mixed_neighbors(c));
    const auto d = code_distribution(c, test::mixed_neighbors(c), Neighborhood::n4());
    // levels are 1/6 and 1/3; probe between and below them
    for (double theta : {0.1, 0.25, 0.4}) {
        FeatureVector expected;
        for (int k = 0; k < 16; ++k) {
            expected[static_cast<std::size_t>(k)] = d[k] >= theta;
        }
        int agree = 0;
        PlocConfig cfg;
        cfg.num_isis = 600;
        for (std::uint64_t seed = 1; seed <= 40; ++seed) {
            cfg.seed = seed;
            const auto r = run_ploc(cell.rates, cfg);
            agree += significance_threshold(r.histograms(cell.row, cell.col), theta) == expected;
        }
        CHECK(agree >= 38);
    }
}

TEST_CASE("significance map skips cells without features")
{
    Grid<FeatureHistogram> hs(2, 1, FeatureHistogram(16));
    hs(0, 0) = counts({{3, 4}});
    const auto map = significance_map(hs, 0.5);
    CHECK(map(0, 0) == make_feature_set({3}));
    CHECK(map(0, 1).none());
    const auto mask = significance_mask(map, 3);
    CHECK(mask(0, 0) == 1);
    CHECK(mask(0, 1) == 0);
}

TEST_CASE("pairwise correlation")
{
    const auto all = make_feature_set({1, 2, 3, 4, 5, 6, 7});
    const auto a = make_feature_set({1, 2, 3});
    CHECK(pairwise_correlation(a, a, all, 1.0));
    CHECK_FALSE(pairwise_correlation(a, make_feature_set({4, 5}), all, 1e-9));
    CHECK_FALSE(pairwise_correlation(FeatureVector{}, FeatureVector{}, all, 0.3));
    // 1 shared of 4 in the union
    CHECK(pairwise_correlation(a, make_feature_set({3, 4}), all, 0.25));
    CHECK_FALSE(pairwise_correlation(a, make_feature_set({3, 4}), all, 0.26));
    // bits outside the subset are ignored
    CHECK(pairwise_correlation(make_feature_set({1, 9}), make_feature_set({1, 10}), all, 1.0));

    const auto seven = make_feature_set({7});
    for (double theta : {0.01, 0.3, 0.5, 1.0}) {
        CHECK(pairwise_correlation(make_feature_set({7, 1}), make_feature_set({7}), seven, theta));
        CHECK_FALSE(pairwise_correlation(make_feature_set({7}), make_feature_set({1}), seven, theta));
    }
}

TEST_CASE("pairwise correlation is symmetric")
{
    std::mt19937_64 gen(17);
    const auto subset = salient_subset();
    for (int trial = 0; trial < 2000; ++trial) {
        const auto a = random_vector(gen, 16);
        const auto b = random_vector(gen, 16);
        const double theta = 0.05 + 0.95 * static_cast<double>(gen() % 1000) / 1000.0;
        CHECK(pairwise_correlation(a, b, subset, theta) == pairwise_correlation(b, a, subset, theta));
    }
}

TEST_CASE("correlation map on uniform vectors")
{
    Grid<FeatureVector> vs(5, 4, make_feature_set({7}));
    CorrelationParams p{0.3, 8, make_feature_set({7})};
    const auto map = correlation_map(vs, p);
    for (int row = 0; row < 4; ++row) {
        for (int col = 0; col < 5; ++col) {
            const bool interior = row > 0 && row < 3 && col > 0 && col < 4;
            CHECK(map(row, col) == (interior ? 1 : 0));
        }
    }
    CHECK(correlation_map(Grid<FeatureVector>(5, 4), p) == BinaryImage(5, 4, 0));
}

TEST_CASE("single-feature map is a majority vote on that feature")
{
    std::mt19937_64 gen(23);
    Grid<FeatureVector> vs(12, 10);
    for (auto& v : vs.cells()) {
        v[7] = gen() % 3 != 0;
        v[3] = gen() & 1;
    }
    const auto seven = make_feature_set({7});
    const auto map = correlation_map(vs, {0.3, 5, seven});
    for (int row = 0; row < 10; ++row) {
        for (int col = 0; col < 12; ++col) {
            int votes = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if ((dy || dx) && vs.contains(row + dy, col + dx)) {
                        votes += vs(row + dy, col + dx)[7];
                    }
                }
            }
            CHECK(map(row, col) == (vs(row, col)[7] && votes >= 5 ? 1 : 0));
        }
    }
}

TEST_CASE("raising n_corr never adds pixels; theta_corr is irrelevant for one feature")
{
    std::mt19937_64 gen(31);
    Grid<FeatureVector> vs(16, 16);
    for (auto& v : vs.cells()) {
        v = random_vector(gen, 16);
    }
    const auto subset = salient_subset();
    BinaryImage prev = correlation_map(vs, {0.3, 1, subset});
    for (int n = 2; n <= 8; ++n) {
        const auto cur = correlation_map(vs, {0.3, n, subset});
        for (std::size_t i = 0; i < cur.size(); ++i) {
            CHECK(cur[i] <= prev[i]);
        }
        prev = cur;
    }
    for (int k : {1, 6, 12}) {
        const auto single = make_feature_set({k});
        const auto ref = correlation_map(vs, {0.01, 4, single});
        for (double theta : {0.3, 0.5, 1.0}) {
            CHECK(correlation_map(vs, {theta, 4, single}) == ref);
        }
    }
}

TEST_CASE("correlation parameter validation")
{
    const auto s = make_feature_set({7});
    CHECK_THROWS_AS(CorrelationParams({0.0, 5, s}).validate(), ConfigError);
    CHECK_THROWS_AS(CorrelationParams({1.5, 5, s}).validate(), ConfigError);
    CHECK_THROWS_AS(CorrelationParams({0.3, 0, s}).validate(), ConfigError);
    CHECK_THROWS_AS(CorrelationParams({0.3, 9, s}).validate(), ConfigError);
    CHECK_THROWS_AS(CorrelationParams({0.3, 5, FeatureVector{}}).validate(), ConfigError);
}

TEST_CASE("salient subset")
{
    CHECK(feature_codes(salient_subset()) == std::vector<int>{1, 2, 3, 4, 5, 6, 8, 9, 10, 12});
}

TEST_CASE("salient points on synthetic shapes")
{
    PlocConfig cfg;
    cfg.num_isis = 600;
    const SalientParams params;

    CHECK(salient_points(synthetic::uniform(32, 32, 128), cfg, params).points.empty());

    const auto point = salient_points(synthetic::isolated_point(32, 32), cfg, params);
    for (const auto& p : point.points) {
        CHECK(inside_box(p, 16, 16));
    }

    const auto corner = salient_points(synthetic::l_corner(32, 32), cfg, params);
    CHECK(std::find(corner.points.begin(), corner.points.end(), Point{16, 16}) != corner.points.end());
    for (const auto& p : corner.points) {
        CHECK((std::abs(p.m - 16) <= 2 && std::abs(p.n - 16) <= 2));
    }

    // three pixel wide L-shaped line, softened; its outer corner is at (24, 15)
    GrayImage l(32, 32, 0);
    for (int row = 8; row <= 24; ++row) {
        for (int col = 15; col <= 17; ++col) {
            l(row, col) = 255;
        }
    }
    for (int row = 22; row <= 24; ++row) {
        for (int col = 15; col <= 28; ++col) {
            l(row, col) = 255;
        }
    }
    const auto line = salient_points(synthetic::gaussian_blur(l, 0.8), cfg, params);
    CHECK(std::find(line.points.begin(), line.points.end(), Point{24, 15}) != line.points.end());

    PlocConfig n8 = cfg;
    n8.neighborhood = NeighborhoodKind::N8;
    CHECK_THROWS_AS(salient_points(synthetic::uniform(8, 8, 1), n8, params), ConfigError);
}

TEST_CASE("sharp isolated point yields only non-salient codes")
{
    // dark cells see the bright pixel plus equal-rate neighbors: code 15;
    // the bright pixel sees only much slower neighbors: mostly code 0
    PlocConfig cfg;
    cfg.num_isis = 600;
    const auto r = run_ploc(synthetic::isolated_point(9, 9), cfg);
    CHECK(r.histograms(3, 4).counts[15] == 600);
    CHECK(r.histograms(4, 4).counts[0] > 570);
}
