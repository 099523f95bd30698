#include <cmath>
#include <random>

#include "doctest.h"

#include "oracles/metrics.hpp"
#include "pccdr/errors.hpp"
#include "pccdr/metrics.hpp"
#include "pccdr/parallel.hpp"

using namespace pccdr;

namespace {

Matrix random_matrix(std::size_t n, std::size_t d, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Matrix m(n, d);
    for (auto& v : m.values()) v = nd(rng);
    return m;
}

// Rotation in the (0, 1) plane, uniform scale, translation.
Matrix similarity(const Matrix& x, double angle, double scale, double shift) {
    Matrix y = x;
    const double c = std::cos(angle), s = std::sin(angle);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        if (x.cols() >= 2) {
            y(i, 0) = c * x(i, 0) - s * x(i, 1);
            y(i, 1) = s * x(i, 0) + c * x(i, 1);
        }
        for (std::size_t j = 0; j < x.cols(); ++j) y(i, j) = scale * y(i, j) + shift * static_cast<double>(j + 1);
    }
    return y;
}

}  // namespace

TEST_CASE("ranked neighbors") {
    const auto t = ranked_neighbors(Matrix(3, 1, {0, 1, 3}));
    CHECK(t.rank(0, 0) == 0);
    CHECK(t.rank(0, 1) == 1);
    CHECK(t.rank(0, 2) == 2);
    CHECK(t.rank(2, 1) == 1);

    // Points 1, 2 and 3 coincide: ties go to the lower index.
    const auto d = ranked_neighbors(Matrix(4, 1, {0, 5, 5, 5}));
    CHECK(d.rank(0, 1) == 1);
    CHECK(d.rank(0, 2) == 2);
    CHECK(d.rank(0, 3) == 3);
    CHECK(d.rank(3, 1) == 1);
    CHECK(d.rank(3, 2) == 2);

    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 5; ++trial) {
        Matrix x = random_matrix(30, 3, rng);
        x.row(7)[0] = x.row(4)[0];  // an exact duplicate row
        x.row(7)[1] = x.row(4)[1];
        x.row(7)[2] = x.row(4)[2];
        const auto table = ranked_neighbors(x);
        const auto oracle_table = oracle::rank_table(x);
        for (std::size_t i = 0; i < 30; ++i) {
            for (std::size_t j = 0; j < 30; ++j) CHECK(table.rank(i, j) == oracle_table[i][j]);
        }
    }
    CHECK_THROWS_AS(ranked_neighbors(Matrix(1, 2)), InvalidInput);
}

TEST_CASE("local metrics match the brute-force definitions") {
    std::mt19937_64 rng(2);
    struct Case {
        std::size_t n, k;
    };
    for (const Case c : {Case{20, 3}, Case{15, 2}, Case{30, 1}, Case{30, 14}, Case{25, 7}, Case{9, 4}}) {
        for (int trial = 0; trial < 4; ++trial) {
            CAPTURE(c.n);
            CAPTURE(c.k);
            const Matrix x = random_matrix(c.n, 5, rng);
            const Matrix y = random_matrix(c.n, 2, rng);
            const auto want = oracle::local_metrics(x, y, c.k);
            CHECK(std::abs(trustworthiness(x, y, c.k) - want.trustworthiness) < 1e-12);
            CHECK(std::abs(continuity(x, y, c.k) - want.continuity) < 1e-12);
            const auto m = mrre(x, y, c.k);
            CHECK(std::abs(m.mrre_false - want.mrre_false) < 1e-12);
            CHECK(std::abs(m.mrre_missing - want.mrre_missing) < 1e-12);
            const auto all = local_metrics(x, y, c.k);
            CHECK(all.trustworthiness == trustworthiness(x, y, c.k));
            CHECK(all.mrre_missing == m.mrre_missing);
            CHECK(std::abs(continuity(x, y, c.k) - trustworthiness(y, x, c.k)) < 1e-12);
            for (double v : {all.trustworthiness, all.continuity, all.mrre_false, all.mrre_missing}) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
        }
    }
}

TEST_CASE("local metrics: perfect and invariant cases") {
    std::mt19937_64 rng(3);
    const Matrix x = random_matrix(40, 4, rng);
    const auto self = local_metrics(x, x, 5);
    CHECK(self.trustworthiness == 1.0);
    CHECK(self.continuity == 1.0);
    CHECK(self.mrre_false == 1.0);
    CHECK(self.mrre_missing == 1.0);
    const auto scaled = local_metrics(x, similarity(x, 0.0, 5.0, 2.0), 5);
    CHECK(scaled.trustworthiness == 1.0);
    CHECK(scaled.mrre_false == 1.0);
    CHECK(scaled.mrre_missing == 1.0);

    const Matrix y = random_matrix(40, 2, rng);
    const auto base = local_metrics(x, y, 6);
    const auto moved = local_metrics(similarity(x, 1.1, 2.5, -3.0), similarity(y, -0.4, 0.2, 7.0), 6);
    CHECK(std::abs(base.trustworthiness - moved.trustworthiness) < 1e-9);
    CHECK(std::abs(base.continuity - moved.continuity) < 1e-9);
    CHECK(std::abs(base.mrre_false - moved.mrre_false) < 1e-9);
    CHECK(std::abs(base.mrre_missing - moved.mrre_missing) < 1e-9);
}

TEST_CASE("local metric argument checks") {
    std::mt19937_64 rng(4);
    const Matrix x = random_matrix(10, 2, rng);
    CHECK_THROWS_AS(trustworthiness(x, x, 5), InvalidInput);
    CHECK_THROWS_AS(continuity(x, x, 0), InvalidInput);
    CHECK_THROWS_AS(mrre(x, Matrix(9, 2), 2), InvalidInput);
}

TEST_CASE("global correlation") {
    SUBCASE("three collinear points") {
        const auto g = global_correlation(Matrix(3, 1, {0, 1, 2}), Matrix(3, 1, {0, 1, 10}), 100, RunSeed{});
        // pair distances (0,1), (0,2), (1,2): x = 1, 2, 1; y = 1, 10, 9
        CHECK(g.pearson == doctest::Approx(30.0 / std::sqrt(6.0 * 438.0)).epsilon(1e-14));
        CHECK(g.spearman == doctest::Approx(1.5 / std::sqrt(3.0)).epsilon(1e-14));
        CHECK(g.pairs_used == 3);
        CHECK_FALSE(g.sampled);
    }
    SUBCASE("matches the oracle") {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 10; ++trial) {
            const Matrix x = random_matrix(25, 4, rng);
            Matrix y = random_matrix(25, 2, rng);
            y.row(3)[0] = y.row(9)[0];
            y.row(3)[1] = y.row(9)[1];  // tied distances in Y
            const auto want = oracle::global_correlation(x, y);
            const auto got = global_correlation(x, y, 300, RunSeed{static_cast<std::uint64_t>(trial)});
            CHECK(std::abs(got.pearson - want.first) < 1e-12);
            CHECK(std::abs(got.spearman - want.second) < 1e-12);
            CHECK(got.pairs_used == 300);
        }
    }
    SUBCASE("isometry and identity") {
        std::mt19937_64 rng(6);
        const Matrix x = random_matrix(30, 3, rng);
        const auto self = global_correlation(x, x, kDefaultMaxPairs, RunSeed{});
        CHECK(std::abs(self.pearson - 1.0) < 1e-12);
        CHECK(std::abs(self.spearman - 1.0) < 1e-12);
        const auto rigid = global_correlation(x, similarity(x, 0.9, 1.0, 4.0), kDefaultMaxPairs, RunSeed{});
        CHECK(std::abs(rigid.pearson - 1.0) < 1e-9);
        CHECK(std::abs(rigid.spearman - 1.0) < 1e-9);
    }
    SUBCASE("pair sampling") {
        std::mt19937_64 rng(7);
        const Matrix x = random_matrix(200, 3, rng);
        const Matrix y = random_matrix(200, 2, rng);
        const auto full = global_correlation(x, y, kDefaultMaxPairs, RunSeed{});
        const auto a = global_correlation(x, y, 5000, RunSeed{3});
        const auto b = global_correlation(x, y, 5000, RunSeed{3});
        const auto c = global_correlation(x, y, 5000, RunSeed{4});
        CHECK(a.sampled);
        CHECK(a.pairs_used == 5000);
        CHECK(a.pearson == b.pearson);
        CHECK(a.spearman == b.spearman);
        CHECK(a.pearson != c.pearson);
        CHECK(std::abs(a.pearson - full.pearson) < 0.05);
    }
    SUBCASE("degenerate") {
        const Matrix x(5, 2, {0, 0, 1, 0, 0, 1, 1, 1, 2, 2});
        CHECK_THROWS_AS(global_correlation(x, Matrix(5, 2, 1.0), 100, RunSeed{}), DegenerateData);
        CHECK_THROWS_AS(global_correlation(Matrix(2, 1, {0, 1}), Matrix(2, 1, {0, 1}), 100, RunSeed{}),
                        InvalidInput);
    }
}

TEST_CASE("evaluate") {
    std::mt19937_64 rng(8);
    const Matrix x = random_matrix(80, 5, rng);
    const auto self = evaluate(x, x, {10});
    CHECK(self.ls_avg == 1.0);
    CHECK(std::abs(self.gs_avg - 1.0) < 1e-12);
    CHECK(self.k_neighbors == 10);

    const Matrix y = random_matrix(80, 2, rng);
    set_thread_count(1);
    const auto r = evaluate(x, y, {10, 1000, RunSeed{5}});
    set_thread_count(3);
    CHECK(evaluate(x, y, {10, 1000, RunSeed{5}}) == r);
    set_thread_count(1);
    CHECK(r.ls_avg == doctest::Approx((r.trustworthiness + r.continuity + r.mrre_false + r.mrre_missing) / 4)
                          .epsilon(1e-12));
    CHECK(r.gs_avg == doctest::Approx((r.pearson_global + r.spearman_global) / 2).epsilon(1e-12));
    CHECK(r.pairs_sampled);
    CHECK(r.pairs_used == 1000);
    CHECK(r.seed == 5);

    const auto j = to_json(r);
    for (const char* key : {"trustworthiness", "continuity", "mrre_false", "mrre_missing", "pearson_global",
                            "spearman_global", "ls_avg", "gs_avg", "k_neighbors", "max_pairs", "pairs_used",
                            "pairs_sampled", "seed"}) {
        CHECK(j.contains(key));
    }
    CHECK(metric_report_from_json(nlohmann::json::parse(j.dump())) == r);
    CHECK_THROWS_AS(evaluate(x, Matrix(79, 2, 1.0)), InvalidInput);
}
