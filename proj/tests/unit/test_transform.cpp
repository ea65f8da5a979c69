#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "lsp/error.hpp"
#include "lsp/transform.hpp"
#include "oracles.hpp"
#include "random_data.hpp"

using namespace lsp;
using namespace lsp::transform;

namespace {

std::vector<int> ints(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

bool has_shape(const Partition& p, std::size_t n, std::size_t k) {
    std::size_t full = 0, rest = 0;
    for (const auto& b : p.blocks()) {
        if (b.size() == k)
            ++full;
        else
            rest += b.size();
    }
    return p.element_count() == n && full == n / k && rest == n % k;
}

}  // namespace

TEST_CASE("count_partitions fixtures") {
    CHECK(count_partitions(6, 2) == 15);
    CHECK(count_partitions(6, 3) == 10);
    CHECK(count_partitions(6, 4) == 15);
    CHECK(count_partitions(6, 5) == 6);
    CHECK(count_partitions(14, 12) == 91);
    CHECK(count_partitions(22, 21) == 22);
    CHECK(count_partitions(6, 1) == 1);
    CHECK(count_partitions(6, 6) == 1);
    CHECK_THROWS_AS(count_partitions(6, 0), InvalidArgument);
    CHECK_THROWS_AS(count_partitions(6, 7), InvalidArgument);
}

TEST_CASE("count_partitions matches brute force") {
    for (std::size_t n = 1; n <= 8; ++n)
        for (std::size_t k = 1; k <= n; ++k) {
            CAPTURE(n);
            CAPTURE(k);
            CHECK(count_partitions(n, k) == oracle::count_shaped_partitions(n, k));
        }
}

TEST_CASE("count_partitions stays exact for large n") {
    // 40 labels in blocks of 2: 40! / (2^20 20!) = 39!!
    BigCount double_factorial = 1;
    for (int i = 39; i > 1; i -= 2) double_factorial *= i;
    CHECK(count_partitions(40, 2) == double_factorial);
}

TEST_CASE("enumerate_partitions lists every shaped partition once") {
    for (std::size_t n = 1; n <= 8; ++n)
        for (std::size_t k = 1; k <= n; ++k) {
            auto all = enumerate_partitions(n, k);
            CHECK(all.size() == count_partitions(n, k));
            CHECK(std::set<Partition>(all.begin(), all.end()).size() == all.size());
            CHECK(std::is_sorted(all.begin(), all.end()));
            for (const auto& p : all) CHECK(has_shape(p, n, k));
        }
    CHECK_THROWS_AS(enumerate_partitions(20, 2, 1000), InvalidArgument);
}

TEST_CASE("sample_partitions") {
    auto all = sample_partitions(6, 2, 1000, 1);
    CHECK(all.size() == 15);
    CHECK(all == enumerate_partitions(6, 2));

    auto a = sample_partitions(4, 2, 3, 1);
    auto b = sample_partitions(4, 2, 3, 2);
    CHECK(a.size() == 3);
    CHECK(b.size() == 3);
    CHECK(std::set<Partition>(a.begin(), a.end()).size() == 3);
    CHECK(sample_partitions(4, 2, 3, 1) == a);

    auto whole = sample_partitions(5, 5, 10, 3);
    REQUIRE(whole.size() == 1);
    CHECK(whole[0] == Partition::single_block(5));

    auto big = sample_partitions(30, 4, 250, 9);
    CHECK(big.size() == 250);
    CHECK(std::set<Partition>(big.begin(), big.end()).size() == 250);
    for (const auto& p : big) CHECK(has_shape(p, 30, 4));
}

TEST_CASE("draw_partition is uniform over the 15 pairings of six labels") {
    std::mt19937_64 rng(2024);
    std::map<Partition, int> counts;
    const int draws = 15000;
    for (int i = 0; i < draws; ++i) ++counts[draw_partition(6, 2, rng)];
    REQUIRE(counts.size() == 15);
    double chi2 = 0.0;
    const double expected = draws / 15.0;
    for (const auto& [p, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi2 < 29.14);  // 0.99 quantile, 14 degrees of freedom
}

TEST_CASE("k_grid") {
    CHECK(ints(k_grid(6)) == std::vector<int>{1, 2, 3, 4, 5});
    CHECK(ints(k_grid(2)) == std::vector<int>{1});
    CHECK(ints(k_grid(101)) == std::vector<int>{10, 20, 30, 40, 51, 61, 71, 81, 91});
    CHECK(ints(k_grid(14)) == std::vector<int>{1, 3, 4, 6, 7, 8, 10, 11, 13});
    CHECK(ints(k_grid(10)) == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9});
    const int custom[] = {50, 50, 99};
    CHECK(ints(k_grid(6, custom)) == std::vector<int>{3, 5});
}

TEST_CASE("LP mapping") {
    auto y = LabelMatrix::from_rows({{1, 0, 1}, {0, 0, 0}, {1, 0, 1}, {0, 1, 1}});
    const std::uint32_t block[] = {0, 2};
    auto m = lp_fit_mapping(y, block);
    REQUIRE(m.class_count() == 3);
    CHECK(m.labels_of(0).empty());
    CHECK(m.labels_of(1) == LabelSet{2});
    CHECK(m.labels_of(2) == LabelSet{0, 2});
    CHECK(m.class_of(y.row(0)) == 2);
    CHECK(m.class_of(y.row(3)) == 1);
    const std::uint8_t unseen[] = {1, 1, 0};
    CHECK_FALSE(m.class_of(unseen));
}

TEST_CASE("LP predictions are always observed combinations") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        auto train = testdata::random_dataset(rng, 40, 3, 5);
        auto test = testdata::random_dataset(rng, 30, 3, 5);
        const std::uint32_t block[] = {0, 1, 2, 3, 4};
        auto model = lp_train(train, block, {});
        std::set<LabelSet> observed;
        for (std::size_t r = 0; r < train.instance_count(); ++r) {
            LabelSet s;
            for (std::uint32_t l = 0; l < 5; ++l)
                if (train.labels()(r, l)) s.push_back(l);
            observed.insert(s);
        }
        for (std::size_t r = 0; r < test.instance_count(); ++r) CHECK(observed.count(lp_predict(model, test.features().row(r))));
    }
}

TEST_CASE("ensemble of singletons equals BR and one block equals LP") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t labels = 2 + rng() % 5;
        auto train = testdata::random_dataset(rng, 30 + rng() % 30, 3, labels);
        auto test = testdata::random_dataset(rng, 25, 3, labels);
        cart::CartParams params;
        if (trial % 2) params.max_depth = 3;

        auto br = br_train(train, params);
        auto singles = ensemble_train(train, {Partition::singletons(labels), PartitionOrigin::apriori}, params);
        LabelSet all(labels);
        for (std::uint32_t l = 0; l < labels; ++l) all[l] = l;
        auto lp = lp_train(train, all, params);
        auto whole = ensemble_train(train, {Partition::single_block(labels), PartitionOrigin::apriori}, params);

        for (std::size_t r = 0; r < test.instance_count(); ++r) {
            auto x = test.features().row(r);
            CHECK(ensemble_predict(singles, x) == br_predict(br, x));
            CHECK(ensemble_predict(whole, x) == lp_predict(lp, x));
        }
    }
}

TEST_CASE("ensemble validation and matrix prediction") {
    std::mt19937_64 rng(41);
    auto train = testdata::random_dataset(rng, 20, 2, 4);
    CHECK_THROWS_AS(ensemble_train(train, {Partition::singletons(3), PartitionOrigin::random}, {}), InvalidArgument);

    auto model = ensemble_train(train, {Partition({{0, 3}, {1, 2}}, 4), PartitionOrigin::random}, {});
    auto y = predict_matrix([&](std::span<const double> x) { return ensemble_predict(model, x); }, train.features(), 4);
    CHECK(y.rows() == train.instance_count());
    CHECK(y.cols() == 4);
    for (std::size_t r = 0; r < y.rows(); ++r) {
        auto pred = ensemble_predict(model, train.features().row(r));
        for (std::uint32_t l = 0; l < 4; ++l)
            CHECK(y(r, l) == static_cast<std::uint8_t>(std::count(pred.begin(), pred.end(), l)));
    }
    CHECK(origin_name(PartitionOrigin::community) == "community");
}
