#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "gapseq/coverage.hpp"
#include "gapseq/errors.hpp"
#include "gapseq/sequence.hpp"
#include "oracles.hpp"

using namespace gapseq;

namespace {

std::set<uint64_t> layer_as_set(const BitVec& layer) {
    std::set<uint64_t> out;
    for (uint64_t i = 0; i < layer.size(); ++i)
        if (layer.test(i)) out.insert(i);
    return out;
}

}  // namespace

TEST_CASE("pairs from {1,2,4,8}") {
    std::vector<uint64_t> w{1, 2, 4, 8};
    auto table = build_table(w, 2, 15);
    REQUIRE(table.layers.size() == 3);
    CHECK(table.weights_used == 4);
    CHECK(layer_as_set(table.layers[0]) == std::set<uint64_t>{0});
    CHECK(layer_as_set(table.layers[1]) == std::set<uint64_t>{1, 2, 4, 8});
    CHECK(layer_as_set(table.layers[2]) == std::set<uint64_t>{3, 5, 6, 9, 10, 12});
}

TEST_CASE("triples from {1,2,3}") {
    std::vector<uint64_t> w{1, 2, 3};
    auto table = build_table(w, 3, 10);
    CHECK(layer_as_set(table.layers[1]) == std::set<uint64_t>{1, 2, 3});
    CHECK(layer_as_set(table.layers[2]) == std::set<uint64_t>{3, 4, 5});
    CHECK(layer_as_set(table.layers[3]) == std::set<uint64_t>{6});
}

TEST_CASE("duplicate values occupy distinct indices") {
    std::vector<uint64_t> w{3, 3};
    auto table = build_table(w, 2, 10);
    CHECK(layer_as_set(table.layers[1]) == std::set<uint64_t>{3});
    CHECK(layer_as_set(table.layers[2]) == std::set<uint64_t>{6});
    auto sums = build_distinct_sums(w, 10);
    CHECK(layer_as_set(sums) == std::set<uint64_t>{0, 3, 6});
}

TEST_CASE("distinct sums of small power-of-two weights cover an initial segment") {
    std::vector<uint64_t> w{1, 2, 4, 8, 16, 32, 64};
    auto sums = build_distinct_sums(w, 100);
    for (uint64_t x = 0; x <= 100; ++x) CHECK(sums.test(x));
    auto rep = report(sums, 1, 100);
    CHECK(rep.covered_count == 100);
    CHECK(rep.uncovered_total == 0);
    CHECK(rep.uncovered.empty());
    CHECK_FALSE(rep.largest_uncovered.has_value());
    REQUIRE(rep.threshold_n0.has_value());
    CHECK(*rep.threshold_n0 == 1);
}

TEST_CASE("even weights reach only even sums") {
    std::vector<uint64_t> w{2, 4, 6};
    auto sums = build_distinct_sums(w, 12);
    CHECK(layer_as_set(sums) == std::set<uint64_t>{0, 2, 4, 6, 8, 10, 12});
    auto rep = report(sums, 1, 12);
    CHECK(rep.uncovered_total == 6);
    CHECK(rep.uncovered == std::vector<uint64_t>{1, 3, 5, 7, 9, 11});
    REQUIRE(rep.largest_uncovered.has_value());
    CHECK(*rep.largest_uncovered == 11);
    REQUIRE(rep.threshold_n0.has_value());
    CHECK(*rep.threshold_n0 == 12);
}

TEST_CASE("sums from weights {5,6}") {
    std::vector<uint64_t> w{5, 6};
    auto sums = build_distinct_sums(w, 11);
    CHECK(layer_as_set(sums) == std::set<uint64_t>{0, 5, 6, 11});
}

TEST_CASE("layers match the brute-force oracle on random instances") {
    std::mt19937_64 rng(424242);
    for (int trial = 0; trial < 40; ++trial) {
        const size_t n = 1 + rng() % 12;
        const uint64_t horizon = 20 + rng() % 281;
        const uint32_t m = 1 + uint32_t(rng() % 4);
        std::vector<uint64_t> w(n);
        for (auto& x : w) x = 1 + rng() % 60;

        auto table = build_table(w, m, horizon);
        for (uint32_t d = 1; d <= m; ++d) {
            auto want = oracle::d_subset_sums(w, d, horizon);
            CHECK(layer_as_set(table.layers[d]) == want);
        }
        auto sums = build_distinct_sums(w, horizon);
        CHECK(layer_as_set(sums) == oracle::all_subset_sums(w, horizon));

        // every fixed-count sum is in particular a distinct-index sum
        for (uint32_t d = 1; d <= m; ++d)
            for (uint64_t x = 0; x <= horizon; ++x)
                if (table.layers[d].test(x)) CHECK(sums.test(x));
    }
}

TEST_CASE("shifts across word boundaries stay exact") {
    std::vector<uint64_t> w{63, 64, 65, 1};
    auto table = build_table(w, 3, 260);
    for (uint32_t d = 1; d <= 3; ++d)
        CHECK(layer_as_set(table.layers[d]) == oracle::d_subset_sums(w, d, 260));
    std::vector<uint64_t> two64{64, 64};
    CHECK(layer_as_set(build_distinct_sums(two64, 200)) == std::set<uint64_t>{0, 64, 128});
}

TEST_CASE("extending the weight list only grows the layers") {
    std::mt19937_64 rng(7);
    std::vector<uint64_t> w(10);
    for (auto& x : w) x = 1 + rng() % 40;
    auto part = build_table(std::span(w.data(), 6), 3, 200);
    auto full = build_table(w, 3, 200);
    for (uint32_t d = 0; d <= 3; ++d)
        for (uint64_t x = 0; x <= 200; ++x)
            if (part.layers[d].test(x)) CHECK(full.layers[d].test(x));
}

TEST_CASE("weights past the horizon are skipped, zero weights rejected") {
    std::vector<uint64_t> w{5, 500, 6};
    auto table = build_table(w, 1, 20);
    CHECK(table.weights_used == 2);
    CHECK(layer_as_set(table.layers[1]) == std::set<uint64_t>{5, 6});
    std::vector<uint64_t> bad{3, 0};
    CHECK_THROWS_AS(build_table(bad, 1, 20), ConfigError);
    CHECK_THROWS_AS(build_distinct_sums(bad, 20), ConfigError);
    CHECK_THROWS_AS(build_table(w, 0, 20), ConfigError);
    CHECK_THROWS_AS(build_table(w, 1, 0), ConfigError);
}

TEST_CASE("report pins the threshold next to the last gap") {
    BitVec layer(11);
    for (uint64_t i : {0, 5, 6, 8, 9, 10}) layer.set(i);

    auto rep = report(layer, 5, 10);
    CHECK(rep.covered_count == 5);
    CHECK(rep.uncovered == std::vector<uint64_t>{7});
    REQUIRE(rep.threshold_n0.has_value());
    CHECK(*rep.threshold_n0 == 8);

    // hi itself uncovered: no threshold, but the largest gap is exact
    auto open = report(layer, 5, 7);
    CHECK_FALSE(open.threshold_n0.has_value());
    REQUIRE(open.largest_uncovered.has_value());
    CHECK(*open.largest_uncovered == 7);

    // degenerate one-point window on a covered bit
    auto point = report(layer, 0, 0);
    CHECK(point.covered_count == 1);
    CHECK(point.uncovered_total == 0);
    REQUIRE(point.threshold_n0.has_value());
    CHECK(*point.threshold_n0 == 0);
}

TEST_CASE("threshold property on random layers") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        BitVec layer(200);
        for (int b = 0; b < 140; ++b) layer.set(rng() % 200);
        uint64_t lo = rng() % 100, hi = lo + rng() % (200 - lo);
        auto rep = report(layer, lo, hi);
        CHECK(rep.covered_count + rep.uncovered_total == hi - lo + 1);
        if (rep.threshold_n0) {
            uint64_t t = *rep.threshold_n0;
            CHECK((t == lo || !layer.test(t - 1)));
            for (uint64_t x = t; x <= hi; ++x) CHECK(layer.test(x));
        } else {
            CHECK_FALSE(layer.test(hi));
        }
    }
}

TEST_CASE("report windows must stay inside the table") {
    BitVec layer(11);
    layer.set(0);
    CHECK_THROWS_AS(report(layer, 0, 11), WindowExceedsHorizonError);
    CHECK_THROWS_AS(report(layer, 8, 3), ConfigError);
}

TEST_CASE("uncovered list truncates at ten thousand with exact totals") {
    BitVec layer(25001);
    for (uint64_t i = 0; i <= 25000; i += 2) layer.set(i);  // odds uncovered
    auto rep = report(layer, 1, 24999);
    CHECK(rep.uncovered.size() == 10000);
    CHECK(rep.uncovered_total == 12500);
    CHECK(rep.uncovered.front() == 1);
    CHECK(rep.uncovered.back() == 19999);  // list stops early ...
    REQUIRE(rep.largest_uncovered.has_value());
    CHECK(*rep.largest_uncovered == 24999);  // ... but the extreme is exact
    CHECK_FALSE(rep.threshold_n0.has_value());
}

TEST_CASE("brown criterion on classic prefixes") {
    std::vector<uint64_t> pow2{1, 2, 4, 8, 16};
    CHECK(brown_criterion(pow2).complete);

    std::vector<uint64_t> fib{1, 1, 2, 3, 5, 8, 13};
    CHECK(brown_criterion(fib).complete);

    std::vector<uint64_t> gap{1, 2, 4, 9};
    auto g = brown_criterion(gap);
    CHECK_FALSE(g.complete);
    REQUIRE(g.first_violation_index.has_value());
    CHECK(*g.first_violation_index == 4);  // 9 > 1+2+4+1

    std::vector<uint64_t> no_one{2, 3};
    auto n1 = brown_criterion(no_one);
    CHECK_FALSE(n1.complete);
    CHECK(*n1.first_violation_index == 1);

    auto empty = brown_criterion(std::span<const uint64_t>{});
    CHECK_FALSE(empty.complete);
    CHECK(*empty.first_violation_index == 1);

    std::vector<uint64_t> late{1, 1, 5};
    CHECK(*brown_criterion(late).first_violation_index == 3);  // 5 > 1+1+1
}

TEST_CASE("realized differences of a coin sequence live in the monoid") {
    auto seq = generate(GapDistribution::finite({{2, 0.5}, {3, 0.5}}), 1, 5000);
    auto desc = build({2, 3});
    auto rep = difference_set_check(seq, desc, 100);
    CHECK(rep.window_hi == 100);
    CHECK(rep.all_contained);
    CHECK_FALSE(rep.first_violation.has_value());
    CHECK(rep.member_count == 99);  // [1,100] minus the single non-member 1
    CHECK(rep.realized_count == 99);
    CHECK(rep.saturation == doctest::Approx(1.0));
}

TEST_CASE("difference violations are caught and located") {
    WeightSequence seq;
    seq.weights = {2, 4};
    seq.gaps = {2, 2};
    seq.horizon = 4;
    auto desc = build({3});
    auto rep = difference_set_check(seq, desc, 10);
    CHECK_FALSE(rep.all_contained);
    REQUIRE(rep.first_violation.has_value());
    CHECK(*rep.first_violation == 2);
    CHECK(rep.member_count == 3);  // 3, 6, 9
    CHECK(rep.realized_count == 2);
    CHECK(rep.saturation == doctest::Approx(0.0));
}

TEST_CASE("difference check includes the zero base point") {
    // W_1 = 5 must itself count as the difference W_1 - W_0
    WeightSequence seq;
    seq.weights = {5};
    seq.gaps = {5};
    seq.horizon = 5;
    auto desc = build({5});
    auto rep = difference_set_check(seq, desc, 10);
    CHECK(rep.all_contained);
    CHECK(rep.realized_count == 1);
    CHECK(rep.member_count == 2);  // 5 and 10
    CHECK(rep.saturation == doctest::Approx(0.5));
}
