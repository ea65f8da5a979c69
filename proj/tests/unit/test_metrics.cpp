#include <doctest.h>

#include <random>

#include "lsp/error.hpp"
#include "lsp/metrics.hpp"
#include "oracles.hpp"

using namespace lsp;
using namespace lsp::metrics;

namespace {

std::vector<std::set<int>> to_sets(const LabelMatrix& m) {
    std::vector<std::set<int>> out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m(r, c)) out[r].insert(static_cast<int>(c));
    return out;
}

LabelMatrix random_labels(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    LabelMatrix m(rows, cols);
    const auto density = rng() % 4;  // vary sparsity, including all-zero batches
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = (rng() % 4) < density;
    return m;
}

}  // namespace

TEST_CASE("hand-computed example") {
    // truth {0,1}, {2}; predicted {0}, {2}
    auto t = LabelMatrix::from_rows({{1, 1, 0}, {0, 0, 1}});
    auto p = LabelMatrix::from_rows({{1, 0, 0}, {0, 0, 1}});
    PredictionBatch b(t, p);
    CHECK(hamming_loss(b) == doctest::Approx(1.0 / 6.0));
    CHECK(subset_accuracy(b) == 0.5);
    CHECK(jaccard_score(b) == doctest::Approx(0.75));
    CHECK(f1_micro(b) == doctest::Approx(0.8));
    CHECK(f1_macro(b) == doctest::Approx(2.0 / 3.0));

    auto c = confusion_counts(b);
    CHECK(c.tp == std::vector<std::size_t>{1, 0, 1});
    CHECK(c.fp == std::vector<std::size_t>{0, 0, 0});
    CHECK(c.fn == std::vector<std::size_t>{0, 1, 0});
    CHECK(c.tn == std::vector<std::size_t>{1, 1, 1});
}

TEST_CASE("perfect prediction") {
    auto t = LabelMatrix::from_rows({{1, 0, 1}, {0, 1, 0}});
    PredictionBatch b(t, t);
    CHECK(hamming_loss(b) == 0.0);
    CHECK(subset_accuracy(b) == 1.0);
    CHECK(jaccard_score(b) == 1.0);
    CHECK(f1_micro(b) == 1.0);
    CHECK(f1_macro(b) == 1.0);
}

TEST_CASE("zero-division conventions") {
    auto empty = LabelMatrix::from_rows({{0, 0}, {0, 0}});
    PredictionBatch b(empty, empty);
    CHECK(hamming_loss(b) == 0.0);
    CHECK(subset_accuracy(b) == 1.0);
    CHECK(jaccard_score(b) == 1.0);
    CHECK(f1_micro(b) == 0.0);
    CHECK(f1_macro(b) == 0.0);

    // label 1 never occurs: contributes 0 to the macro mean
    auto t = LabelMatrix::from_rows({{1, 0}, {1, 0}});
    PredictionBatch half(t, t);
    CHECK(f1_macro(half) == 0.5);
    CHECK(f1_micro(half) == 1.0);
}

TEST_CASE("all metrics match the set-based oracle exactly") {
    std::mt19937_64 rng(1000);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t rows = 1 + rng() % 20, cols = 1 + rng() % 8;
        auto t = random_labels(rng, rows, cols);
        auto p = random_labels(rng, rows, cols);
        PredictionBatch b(t, p);
        auto o = oracle::set_metrics(to_sets(t), to_sets(p), static_cast<int>(cols));
        CHECK(hamming_loss(b) == o.hamming_loss);
        CHECK(subset_accuracy(b) == o.subset_accuracy);
        CHECK(jaccard_score(b) == o.jaccard);
        CHECK(f1_micro(b) == o.f1_micro);
        CHECK(f1_macro(b) == o.f1_macro);
    }
}

TEST_CASE("structural properties") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t rows = 1 + rng() % 15, cols = 1 + rng() % 6;
        auto t = random_labels(rng, rows, cols);
        auto p = random_labels(rng, rows, cols);
        PredictionBatch b(t, p), swapped(p, t);
        for (auto m : all_metrics) {
            const double v = evaluate(m, b);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            if (m != Metric::f1_micro && m != Metric::f1_macro) {
                CHECK(evaluate(m, swapped) == doctest::Approx(v).epsilon(1e-12));
            }
        }
        CHECK(f1_micro(swapped) == doctest::Approx(f1_micro(b)).epsilon(1e-12));
        CHECK(f1_macro(swapped) == doctest::Approx(f1_macro(b)).epsilon(1e-12));
        CHECK(subset_accuracy(b) <= jaccard_score(b) + 1e-12);
        CHECK(1.0 - hamming_loss(b) >= subset_accuracy(b) - 1e-12);

        // row order does not matter
        std::vector<std::size_t> order(rows);
        for (std::size_t i = 0; i < rows; ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        LabelMatrix t2(0, cols), p2(0, cols);
        for (auto r : order) {
            t2.append_row(t.row(r));
            p2.append_row(p.row(r));
        }
        PredictionBatch b2(t2, p2);
        for (auto m : all_metrics) CHECK(evaluate(m, b2) == doctest::Approx(evaluate(m, b)).epsilon(1e-12));
    }
}

TEST_CASE("batch validation") {
    auto a = LabelMatrix::from_rows({{1, 0}});
    auto wide = LabelMatrix::from_rows({{1, 0, 0}});
    auto tall = LabelMatrix::from_rows({{1, 0}, {0, 1}});
    auto bad = LabelMatrix::from_rows({{2, 0}});
    LabelMatrix none(0, 2), no_labels(1, 0);
    CHECK_THROWS_AS(PredictionBatch(a, wide), InvalidArgument);
    CHECK_THROWS_AS(PredictionBatch(a, tall), InvalidArgument);
    CHECK_THROWS_AS(PredictionBatch(a, bad), InvalidArgument);
    CHECK_THROWS_AS(PredictionBatch(none, none), InvalidArgument);
    CHECK_THROWS_AS(PredictionBatch(no_labels, no_labels), InvalidArgument);
}

TEST_CASE("metric names") {
    for (auto m : all_metrics) CHECK(parse_metric(metric_name(m)) == m);
    CHECK_FALSE(parse_metric("accuracy"));
    CHECK_FALSE(higher_is_better(Metric::hamming_loss));
    CHECK(higher_is_better(Metric::f1_macro));
}
