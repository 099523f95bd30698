#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"

#include "oracles/fd.hpp"
#include "pccdr/errors.hpp"
#include "pccdr/losses.hpp"
#include "pccdr/parallel.hpp"
#include "pccdr/softrank.hpp"

using namespace pccdr;

namespace {

using Vec = std::vector<double>;

Matrix random_matrix(std::size_t n, std::size_t d, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> nd(0.0, scale);
    Matrix m(n, d);
    for (auto& v : m.values()) v = nd(rng);
    return m;
}

Matrix ranks_of_rows(const Matrix& m) {
    Matrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto h = softrank::hard_ranks(m.row(i)).values;
        std::copy(h.begin(), h.end(), r.row(i).begin());
    }
    return r;
}

ClusterResult random_task(std::size_t n, std::size_t k, std::mt19937_64& rng) {
    ClusterResult t;
    t.k = k;
    t.assignments.resize(n);
    for (std::size_t i = 0; i < n; ++i) t.assignments[i] = static_cast<std::uint32_t>(i < k ? i : rng() % k);
    return t;
}

}  // namespace

TEST_CASE("reference set") {
    std::mt19937_64 rng(1);
    const Matrix data = random_matrix(20, 3, rng);

    SUBCASE("K = N samples every point once") {
        const auto refs = build_reference_set(data, 20, RunSeed{5});
        CHECK(std::set<std::uint32_t>(refs.indices.begin(), refs.indices.end()).size() == 20);
        for (std::size_t j = 0; j < 20; ++j) CHECK(refs.dx(refs.indices[j], j) == 0.0);
    }
    SUBCASE("rows of rx are hard ranks of dx") {
        const auto refs = build_reference_set(data, 7, RunSeed{6});
        CHECK(refs.count() == 7);
        CHECK(refs.rx == ranks_of_rows(refs.dx));
        for (std::size_t i = 0; i < 20; ++i) {
            const auto row = refs.rx.row(i);
            CHECK(std::accumulate(row.begin(), row.end(), 0.0) == 28.0);
        }
        CHECK(build_reference_set(data, 7, RunSeed{6}).indices == refs.indices);
    }
    SUBCASE("points on a line") {
        const auto refs = reference_set_from_indices(Matrix(3, 1, {0, 1, 2}), {0, 2});
        CHECK(refs.dx(1, 0) == 1.0);
        CHECK(refs.dx(1, 1) == 1.0);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(build_reference_set(data, 21, RunSeed{}), InvalidInput);
        CHECK_THROWS_AS(build_reference_set(data, 0, RunSeed{}), InvalidInput);
        CHECK_THROWS_AS(build_reference_set(Matrix(6, 2, 3.0), 3, RunSeed{}), DegenerateData);
    }
}

TEST_CASE("pearson loss examples") {
    const Vec dx{1, 2, 3, 4.5, 0.2};
    Vec dy(dx.size());
    for (std::size_t i = 0; i < dx.size(); ++i) dy[i] = 2 * dx[i] + 3;
    CHECK(pearson_loss(dx, dy).value == doctest::Approx(-1.0).epsilon(1e-14));
    for (std::size_t i = 0; i < dx.size(); ++i) dy[i] = -dx[i];
    CHECK(pearson_loss(dx, dy).value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pearson_loss(Vec{1, 2, 3}, Vec{1, 3, 2}).value == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(std::abs(pearson_loss(dx, dx).value + 1.0) < 1e-12);

    const auto flat = pearson_loss(dx, Vec(dx.size(), 4.0));
    CHECK(flat.degenerate);
    CHECK(flat.value == 0.0);
    CHECK(std::all_of(flat.grad.begin(), flat.grad.end(), [](double g) { return g == 0.0; }));
    CHECK_THROWS_AS(pearson_loss(Vec(3, 1.0), Vec{1, 2, 3}), DegenerateData);
    CHECK_THROWS_AS(pearson_loss(Vec{1, 2}, Vec{1, 2, 3}), InvalidInput);
}

TEST_CASE("pearson loss is invariant to positive affine maps of dy") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        Vec dx(40), dy(40), dz(40);
        for (std::size_t i = 0; i < 40; ++i) {
            dx[i] = u(rng);
            dy[i] = u(rng);
        }
        const double a = 0.01 + u(rng);
        const double b = u(rng) - 2.5;
        for (std::size_t i = 0; i < 40; ++i) dz[i] = a * dy[i] + b;
        CHECK(std::abs(pearson_loss(dx, dy).value - pearson_loss(dx, dz).value) < 1e-9);
    }
}

TEST_CASE("spearman loss examples") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    Matrix dx(6, 8);
    for (auto& v : dx.values()) v = u(rng);
    const Matrix rx = ranks_of_rows(dx);
    Matrix dy(6, 8);
    for (std::size_t i = 0; i < dx.values().size(); ++i) dy.values()[i] = std::exp(dx.values()[i]);
    CHECK(spearman_loss(rx, dy, 1e-3).value <= -0.999);
    for (std::size_t i = 0; i < dx.values().size(); ++i) dy.values()[i] = 10.0 - dx.values()[i];
    CHECK(spearman_loss(rx, dy, 1e-3).value >= 0.999);

    const auto single = spearman_loss(Matrix(1, 1, 1.0), Matrix(1, 1, 2.0), 1.0);
    CHECK(single.degenerate);
    CHECK(single.value == 0.0);
    CHECK_THROWS_AS(spearman_loss(rx, dy, 0.0), InvalidInput);
    CHECK_THROWS_AS(spearman_loss(rx, Matrix(6, 7), 1.0), InvalidInput);
}

TEST_CASE("gradients match finite differences: pearson") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int trial = 0; trial < 10; ++trial) {
        CAPTURE(trial);
        const std::size_t n = 5 + trial * 4;
        const std::size_t k = 2 + trial % 15;
            Vec dx(n * k), dy(n * k);
            for (auto& v : dx) v = u(rng);
            for (auto& v : dy) v = u(rng);
            const auto analytic = pearson_loss(dx, dy).grad;
            const auto numeric = oracle::central_difference(dy, [&] { return pearson_loss(dx, dy).value; });
            CHECK(oracle::relative_error(analytic, numeric) < 1e-4);
    }
}

TEST_CASE("gradients match finite differences: spearman") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int trial = 0; trial < 10; ++trial) {
        CAPTURE(trial);
        const std::size_t n = 5 + trial * 4;
        const std::size_t k = 2 + trial % 15;
            Matrix dx(n, k), dy(n, k);
            for (auto& v : dx.values()) v = u(rng);
            for (auto& v : dy.values()) v = u(rng);
            const Matrix rx = ranks_of_rows(dx);
            for (double eps : {0.05, 0.3}) {
                const auto analytic = spearman_loss(rx, dy, eps).grad;
                const auto numeric = oracle::central_difference(
                    dy.values(), [&] { return spearman_loss(rx, dy, eps).value; });
                CHECK(oracle::relative_error(analytic, numeric) < 1e-4);
            }
    }
}

TEST_CASE("gradients match finite differences: correlation") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int trial = 0; trial < 10; ++trial) {
        CAPTURE(trial);
        const std::size_t n = 5 + trial * 4;
        const std::size_t k = 2 + trial % 15;
            const std::size_t m = 1 + trial % 3;
            const Matrix data = random_matrix(n, 4, rng);
            const auto refs = build_reference_set(data, std::min(k, n), RunSeed{static_cast<std::uint64_t>(trial)});
            Embedding emb = random_matrix(n, m, rng);
            for (double eps : {0.02, 1.0}) {
                const auto analytic = correlation_loss(refs, emb, eps).grad_embedding;
                const auto numeric = oracle::central_difference(
                    emb.values(), [&] { return correlation_loss(refs, emb, eps).value; });
                CHECK(oracle::relative_error(analytic.values(), numeric) < 1e-4);
            }
    }
}

TEST_CASE("gradients match finite differences: cluster") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int trial = 0; trial < 10; ++trial) {
        CAPTURE(trial);
        const std::size_t n = 5 + trial * 4;
            const std::size_t m = 1 + trial % 3;
            Embedding emb = random_matrix(n, m, rng);
            std::vector<ClusterResult> tasks{random_task(n, 4, rng), random_task(n, 3, rng)};
            std::vector<ClassifierHead> heads{{random_matrix(4, m + 1, rng)}, {random_matrix(3, m + 1, rng)}};
            const auto res = cluster_loss(tasks, heads, emb);
            const auto ne = oracle::central_difference(emb.values(),
                                                       [&] { return cluster_loss(tasks, heads, emb).value; });
            CHECK(oracle::relative_error(res.grad_embedding.values(), ne) < 1e-4);
            for (std::size_t t = 0; t < 2; ++t) {
                const auto nh = oracle::central_difference(
                    heads[t].weights.values(), [&] { return cluster_loss(tasks, heads, emb).value; });
                CHECK(oracle::relative_error(res.grad_heads[t].values(), nh) < 1e-4);
            }
    }
}

TEST_CASE("gradients match finite differences: anchor") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int trial = 0; trial < 10; ++trial) {
        CAPTURE(trial);
        const std::size_t n = 5 + trial * 4;
            Embedding emb = random_matrix(n, 2, rng);
            const Embedding init = random_matrix(n, 2, rng);
            const auto analytic = anchor_loss(emb, init, 0.7).grad_embedding;
            const auto numeric =
                oracle::central_difference(emb.values(), [&] { return anchor_loss(emb, init, 0.7).value; });
            CHECK(oracle::relative_error(analytic.values(), numeric) < 1e-4);
    }
}

TEST_CASE("correlation loss") {
    std::mt19937_64 rng(5);
    const Matrix data = random_matrix(30, 2, rng);
    const auto refs = build_reference_set(data, 10, RunSeed{1});

    SUBCASE("isometric copy scores -1") {
        const double c = std::cos(0.7), s = std::sin(0.7);
        Embedding emb(30, 2);
        for (std::size_t i = 0; i < 30; ++i) {
            emb(i, 0) = c * data(i, 0) - s * data(i, 1) + 3.0;
            emb(i, 1) = s * data(i, 0) + c * data(i, 1) - 1.0;
        }
        CHECK(std::abs(correlation_loss(refs, emb, 1e-6).value + 1.0) < 1e-9);
    }
    SUBCASE("invariant to rigid motion and scaling") {
        const Embedding emb = random_matrix(30, 2, rng);
        const double c = std::cos(2.1), s = std::sin(2.1);
        Embedding moved(30, 2);
        for (std::size_t i = 0; i < 30; ++i) {
            moved(i, 0) = 3.5 * (c * emb(i, 0) - s * emb(i, 1)) + 10.0;
            moved(i, 1) = 3.5 * (s * emb(i, 0) + c * emb(i, 1)) - 4.0;
        }
        for (double eps : {0.01, 0.1, 1.0}) {
            CHECK(std::abs(correlation_loss(refs, emb, eps).value - correlation_loss(refs, moved, eps).value) <
                  1e-9);
        }
    }
    SUBCASE("collapsed embedding is degenerate") {
        const auto res = correlation_loss(refs, Embedding(30, 2, 0.5), 1.0);
        CHECK(res.degenerate);
        const auto g = res.grad_embedding.values();
        CHECK(std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; }));
    }
    SUBCASE("value in [-1, 1] and thread independent") {
        const Embedding emb = random_matrix(30, 3, rng);
        set_thread_count(1);
        const auto a = correlation_loss(refs, emb, 0.05);
        set_thread_count(5);
        const auto b = correlation_loss(refs, emb, 0.05);
        set_thread_count(1);
        CHECK(a.value >= -1.0);
        CHECK(a.value <= 1.0);
        CHECK(a.value == b.value);
        CHECK(a.grad_embedding == b.grad_embedding);
    }
    SUBCASE("row mismatch") { CHECK_THROWS_AS(correlation_loss(refs, Embedding(29, 2, 1.0), 1.0), InvalidInput); }
}

TEST_CASE("cluster loss examples") {
    std::mt19937_64 rng(6);
    const Embedding emb = random_matrix(25, 2, rng);
    std::vector<ClusterResult> tasks{random_task(25, 4, rng)};
    std::vector<ClassifierHead> heads{{Matrix(4, 3, 0.0)}};
    CHECK(cluster_loss(tasks, heads, emb).value == doctest::Approx(std::log(4.0)).epsilon(1e-14));

    // Saturated classifier: a bias of +1000 on each point's class is only
    // possible per point, so use one-hot points instead.
    Embedding onehot(4, 4, 0.0);
    ClusterResult t;
    t.k = 4;
    t.assignments = {0, 1, 2, 3};
    for (std::size_t i = 0; i < 4; ++i) onehot(i, i) = 1.0;
    Matrix w(4, 5, 0.0);
    for (std::size_t c = 0; c < 4; ++c) w(c, c) = 1000.0;
    std::vector<ClusterResult> one{t};
    std::vector<ClassifierHead> sharp{{w}};
    CHECK(cluster_loss(one, sharp, onehot).value < 1e-6);

    std::vector<ClassifierHead> wrong{{Matrix(4, 2, 0.0)}};
    CHECK_THROWS_AS(cluster_loss(tasks, wrong, emb), InvalidInput);
}

TEST_CASE("anchor loss examples") {
    std::mt19937_64 rng(7);
    const Embedding init = random_matrix(8, 3, rng);
    const auto same = anchor_loss(init, init, 1.0);
    CHECK(same.value == 0.0);
    CHECK(same.grad_embedding == Matrix(8, 3, 0.0));
    Embedding moved = init;
    moved(5, 1) += 0.25;
    CHECK(anchor_loss(moved, init, 0.0).value == 0.0);
    CHECK(anchor_loss(moved, init, 0.0).grad_embedding == Matrix(8, 3, 0.0));
    CHECK(anchor_loss(moved, init, 1.0).value == doctest::Approx(0.0625 / 24).epsilon(1e-12));
    CHECK_THROWS_AS(anchor_loss(moved, Embedding(8, 2), 1.0), InvalidInput);
}
