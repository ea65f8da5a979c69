#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "lsp/error.hpp"
#include "lsp/stats.hpp"
#include "oracles.hpp"

using namespace lsp;
using namespace lsp::stats;

namespace {

LikelihoodTable fixture_likelihoods() {
    std::ifstream in(std::string(LSP_FIXTURES_DIR) + "/reference_likelihoods.csv");
    REQUIRE(in);
    return LikelihoodTable::read_csv(in);
}

// Three methods over four datasets with mean ranks 1.25, 2.0, 2.75.
Matrix<double> friedman_fixture() {
    return Matrix<double>::from_rows({{0.9, 0.8, 0.7}, {0.6, 0.5, 0.4}, {0.95, 0.9, 0.85}, {0.5, 0.5, 0.5}});
}

}  // namespace

TEST_CASE("likelihood of beating random") {
    const std::vector<double> random{0.5, 0.6, 0.8, 0.9};
    CHECK(likelihood_better(0.7, random, true) == 0.5);
    CHECK(likelihood_better(0.7, random, false) == 0.5);
    CHECK(likelihood_better(0.6, random, true) == 0.25);  // ties do not count
    CHECK(likelihood_better(1.0, random, true) == 1.0);
    CHECK(likelihood_better(0.1, random, false) == 1.0);
    CHECK_THROWS_AS(likelihood_better(0.5, std::vector<double>{}, true), InvalidArgument);
}

TEST_CASE("aggregate") {
    auto a = aggregate(std::vector<double>{0.0, 1.0});
    CHECK(a.min == 0.0);
    CHECK(a.median == 0.5);
    CHECK(a.mean == 0.5);
    CHECK(a.std == doctest::Approx(std::sqrt(0.5)));
    auto b = aggregate(std::vector<double>{3, 1, 2});
    CHECK(b.median == 2.0);
    CHECK(b.std == doctest::Approx(1.0));
    CHECK_THROWS_AS(aggregate(std::vector<double>{1.0}), InvalidArgument);
}

TEST_CASE("aggregates from the reference per-dataset tables") {
    auto table = fixture_likelihoods();
    CHECK(table.datasets().size() == 12);
    CHECK(table.methods().size() == 12);
    CHECK(table.metrics().size() == 5);
    auto br = aggregate_likelihoods(table, "BR", "f1_micro");
    CHECK(std::abs(br.mean - 0.840028) < 1e-5);
    CHECK(std::abs(br.median - 0.885556) < 1e-5);
    CHECK(std::abs(br.min - 0.5) < 1e-5);
    CHECK(std::abs(br.std - 0.152530) < 1e-5);
}

TEST_CASE("likelihood table validation and csv round trip") {
    LikelihoodTable t;
    t.set("d1", "BR", "f1_micro", 0.25);
    t.set("d2", "BR", "f1_micro", 0.75);
    t.set("d1", "LP", "f1_micro", 1.0);
    CHECK_THROWS_AS(t.set("d,1", "BR", "f1_micro", 0.5), InvalidArgument);
    CHECK_THROWS_AS(t.set("d1", "", "f1_micro", 0.5), InvalidArgument);
    CHECK_THROWS_AS(t.set("d1", "BR", "f1_micro", 1.5), InvalidArgument);
    CHECK(t.get("d2", "LP", "f1_micro") == std::nullopt);
    CHECK(t.column("BR", "f1_micro") == std::vector<double>{0.25, 0.75});

    std::stringstream io;
    t.write_csv(io);
    CHECK(io.str() == "dataset,method,metric,value\nd1,BR,f1_micro,0.250000\nd1,LP,f1_micro,1.000000\n"
                      "d2,BR,f1_micro,0.750000\n");
    auto back = LikelihoodTable::read_csv(io);
    CHECK(back.size() == 3);
    CHECK(back.get("d1", "LP", "f1_micro") == 1.0);

    std::istringstream bad("dataset,method,metric,value\nd1,BR,f1_micro,abc\n");
    try {
        LikelihoodTable::read_csv(bad);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("aggregate csv round trip") {
    std::vector<AggregateRow> rows{{"BR", "jaccard", {0.1, 0.2, 0.3, 0.4}}};
    std::stringstream io;
    write_aggregates_csv(io, rows);
    CHECK(io.str() == "method,metric,min,median,mean,std\nBR,jaccard,0.100000,0.200000,0.300000,0.400000\n");
    auto back = read_aggregates_csv(io);
    REQUIRE(back.size() == 1);
    CHECK(back[0].value.mean == 0.3);
}

TEST_CASE("friedman ranks with ties") {
    auto r = friedman_ranks(friedman_fixture(), true);
    CHECK(r.mean_ranks == std::vector<double>{1.25, 2.0, 2.75});
    CHECK(r.ranks(3, 0) == 2.0);
    auto lower = friedman_ranks(friedman_fixture(), false);
    CHECK(lower.mean_ranks == std::vector<double>{2.75, 2.0, 1.25});
    auto mixed = friedman_ranks(Matrix<double>::from_rows({{1, 2, 2, 3}}), true);
    CHECK(mixed.mean_ranks == std::vector<double>{4.0, 2.5, 2.5, 1.0});
}

TEST_CASE("iman-davenport on the derived fixture") {
    auto r = friedman_ranks(friedman_fixture(), true);
    auto t = iman_davenport(r.mean_ranks, 4);
    CHECK(t.chi2 == doctest::Approx(4.5));
    CHECK(t.f == doctest::Approx(27.0 / 7.0));
    CHECK(t.df1 == 2.0);
    CHECK(t.df2 == 6.0);
    const double expected = 1.0 - oracle::f_cdf(27.0 / 7.0, 2, 6);
    CHECK(std::abs(t.p - expected) < 1e-10);
    CHECK(t.p > 0.08);
    CHECK(t.p < 0.09);
    CHECK_FALSE(t.degenerate);
}

TEST_CASE("iman-davenport edge cases") {
    // identical ranking on every dataset
    auto d = iman_davenport(std::vector<double>{1.0, 2.0, 3.0}, 5);
    CHECK(d.degenerate);
    CHECK(d.p == 0.0);
    // all tied
    auto tied = iman_davenport(std::vector<double>{2.0, 2.0, 2.0}, 5);
    CHECK(tied.chi2 == 0.0);
    CHECK(tied.p == doctest::Approx(1.0));
    CHECK_THROWS_AS(iman_davenport(std::vector<double>{1.0}, 5), InvalidArgument);
    CHECK_THROWS_AS(iman_davenport(std::vector<double>{1.0, 2.0}, 1), InvalidArgument);
}

TEST_CASE("rom thresholds") {
    auto a = rom_thresholds(6, 0.05);
    REQUIRE(a.size() == 6);
    CHECK(a[0] == doctest::Approx(0.05));
    CHECK(a[1] == doctest::Approx(0.025));
    CHECK(a[2] == doctest::Approx(0.016875).epsilon(1e-12));
    CHECK(a[3] == doctest::Approx(0.0127134765625).epsilon(1e-12));
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i] < a[i - 1]);
    // each threshold sits between Holm's alpha/i and Hochberg-like alpha
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] >= 0.05 / static_cast<double>(i + 1) - 1e-15);
    CHECK(rom_thresholds(1, 0.1) == std::vector<double>{0.1});
    CHECK(rom_thresholds(0, 0.05).empty());
    CHECK_THROWS_AS(rom_thresholds(3, 1.5), InvalidArgument);
}

TEST_CASE("rom post-hoc statistics and step-up decisions") {
    // k = 12 methods, N = 12 datasets; control at rank 8, method 1 four ranks better
    std::vector<double> ranks(12, 8.0);
    ranks[1] = 4.0;
    auto c = rom_posthoc(ranks, 12, 0, 0.05);
    REQUIRE(c.size() == 11);
    CHECK(c[0].method == 1);
    CHECK(c[0].z == doctest::Approx(4.0 / std::sqrt(12.0 * 13.0 / 72.0)));
    CHECK(c[0].z == doctest::Approx(2.7175).epsilon(1e-4));
    CHECK(c[0].p == doctest::Approx(1.0 - oracle::normal_cdf(c[0].z)).epsilon(1e-10));
    CHECK(c[0].p == doctest::Approx(0.00329).epsilon(1e-2));
    // ten p-values of 0.5, one of 0.0033: the smallest faces alpha_11
    auto a = rom_thresholds(11, 0.05);
    CHECK(c[0].threshold == a[10]);
    CHECK(c[0].significant == (c[0].p <= a[10]));
    for (std::size_t i = 1; i < c.size(); ++i) CHECK_FALSE(c[i].significant);

    // step-up: once the largest p passes, every hypothesis is rejected
    std::vector<double> strong{6.0, 1.0, 1.5, 2.0};
    auto all = rom_posthoc(strong, 40, 0, 0.05);
    for (const auto& x : all) CHECK(x.significant);
    CHECK_THROWS_AS(rom_posthoc(strong, 40, 4, 0.05), InvalidArgument);
}

TEST_CASE("distribution functions match the quadrature oracle") {
    for (double x : {-4.0, -1.3, 0.0, 0.4, 2.2, 6.0}) CHECK(std::abs(normal_cdf(x) - oracle::normal_cdf(x)) < 1e-10);
    for (int d1 = 1; d1 <= 40; d1 += 3)
        for (int d2 = 1; d2 <= 40; d2 += 3)
            for (double x : {0.05, 0.5, 1.0, 2.5, 7.0}) {
                const double o = oracle::f_cdf(x, d1, d2);
                CHECK(std::abs(f_cdf(x, d1, d2) - o) < 1e-10);
                CHECK(std::abs(f_sf(x, d1, d2) - (1.0 - o)) < 1e-10);
            }
    CHECK(f_cdf(0.0, 3, 4) == 0.0);
    CHECK(f_sf(0.0, 3, 4) == 1.0);
}

TEST_CASE("rom controls the familywise error under the global null") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit;
    const std::size_t m = 5;
    const double alpha = 0.05;
    const auto thresholds = rom_thresholds(m, alpha);
    int rejections = 0;
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> p(m);
        for (auto& v : p) v = unit(rng);
        std::sort(p.begin(), p.end(), std::greater<>());
        bool any = false;
        for (std::size_t i = 0; i < m; ++i) any = any || p[i] <= thresholds[i];
        rejections += any;
    }
    CHECK(static_cast<double>(rejections) / trials <= alpha + 0.01);
}
