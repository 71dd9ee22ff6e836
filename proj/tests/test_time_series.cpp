#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "gssa/time_series.hpp"

using gssa::DescriptiveStats;
using gssa::pctChangeStats;
using gssa::SampleSplit;
using gssa::splitAtFinalBreak;
using gssa::TimeSeries;

TEST_CASE("TimeSeries validates its observations", "[time_series]") {
    SECTION("fewer than two observations are rejected") {
        REQUIRE_THROWS_AS(TimeSeries(std::vector<double>{}), std::invalid_argument);
        REQUIRE_THROWS_AS(TimeSeries(std::vector<double>{1.0}), std::invalid_argument);
    }

    SECTION("non-finite values are rejected with their position") {
        try {
            TimeSeries series({1.0, std::nan(""), 3.0});
            FAIL("expected invalid_argument");
        } catch (const std::invalid_argument& e) {
            REQUIRE_THAT(e.what(), Catch::Matchers::ContainsSubstring("position 1"));
        }
        REQUIRE_THROWS_AS(TimeSeries({1.0, 2.0, std::numeric_limits<double>::infinity()}),
                          std::invalid_argument);
    }

    SECTION("values are preserved in order") {
        const TimeSeries series({3.0, 1.0, 2.0});
        REQUIRE(series.size() == 3);
        REQUIRE(series[0] == 3.0);
        REQUIRE(series[2] == 2.0);
        REQUIRE_FALSE(series.hasLabels());
    }
}

TEST_CASE("TimeSeries validates period labels", "[time_series]") {
    SECTION("label count must match") {
        REQUIRE_THROWS_AS(TimeSeries({1.0, 2.0}, {"1990-01"}), std::invalid_argument);
    }

    SECTION("labels must be strictly increasing") {
        REQUIRE_THROWS_AS(TimeSeries({1.0, 2.0, 3.0}, {"1990-01", "1990-03", "1990-02"}),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(TimeSeries({1.0, 2.0}, {"1990-01", "1990-01"}), std::invalid_argument);
    }

    SECTION("chronological ISO labels are accepted") {
        const TimeSeries series({1.0, 2.0, 3.0}, {"1990-01", "1990-02", "1990-03"});
        REQUIRE(series.hasLabels());
        REQUIRE(series.labels()[2] == "1990-03");
    }
}

TEST_CASE("SampleSplit partitions the index range", "[time_series]") {
    const SampleSplit split = SampleSplit::atBreak(130, 194);
    REQUIRE(split.in_sample_len == 130);
    REQUIRE(split.out_sample_len == 64);
    REQUIRE(split.in_sample_len + split.out_sample_len == 194);

    REQUIRE_THROWS_AS(SampleSplit::atBreak(1, 10), std::invalid_argument);
    REQUIRE_THROWS_AS(SampleSplit::atBreak(11, 10), std::invalid_argument);

    SECTION("a break at N leaves an empty out-of-sample period") {
        const SampleSplit all_in = SampleSplit::atBreak(10, 10);
        REQUIRE(all_in.out_sample_len == 0);
    }
}

TEST_CASE("pctChangeStats on hand-computed fixtures", "[time_series]") {
    SECTION("a single step of one percent") {
        const TimeSeries series({100.0, 101.0});
        const DescriptiveStats stats = pctChangeStats(series, SampleSplit::atBreak(2, 2));
        REQUIRE_THAT(stats.mean_pct_change_all, Catch::Matchers::WithinAbs(1.0, 1e-12));
        REQUIRE_THAT(stats.mean_pct_change_in, Catch::Matchers::WithinAbs(1.0, 1e-12));
        REQUIRE(stats.mean_pct_change_out == 0.0);
        REQUIRE(stats.sd_pct_change == 0.0);
    }

    SECTION("a constant series has zero changes and zero spread") {
        const TimeSeries series({5.0, 5.0, 5.0, 5.0});
        const DescriptiveStats stats = pctChangeStats(series, SampleSplit::atBreak(2, 4));
        REQUIRE(stats.mean_pct_change_in == 0.0);
        REQUIRE(stats.mean_pct_change_out == 0.0);
        REQUIRE(stats.mean_pct_change_all == 0.0);
        REQUIRE(stats.sd_pct_change == 0.0);
    }

    SECTION("an up-down pair gives mean zero and SD sqrt(200)") {
        const TimeSeries series({100.0, 110.0, 99.0});
        const DescriptiveStats stats = pctChangeStats(series, SampleSplit::atBreak(2, 3));
        REQUIRE_THAT(stats.mean_pct_change_all, Catch::Matchers::WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(stats.sd_pct_change, Catch::Matchers::WithinAbs(14.142135623730951, 1e-9));
        REQUIRE_THAT(stats.mean_pct_change_in, Catch::Matchers::WithinAbs(10.0, 1e-12));
        REQUIRE_THAT(stats.mean_pct_change_out, Catch::Matchers::WithinAbs(-10.0, 1e-12));
    }

    SECTION("a zero observation is reported by position") {
        const TimeSeries series({10.0, 0.0, 12.0});
        try {
            pctChangeStats(series, SampleSplit::atBreak(2, 3));
            FAIL("expected domain_error");
        } catch (const std::domain_error& e) {
            REQUIRE_THAT(e.what(), Catch::Matchers::ContainsSubstring("position 1"));
        }
    }
}

TEST_CASE("pctChangeStats is invariant under positive rescaling", "[time_series][property]") {
    std::mt19937_64 gen(20260821u);
    std::uniform_real_distribution<double> value(1.0, 50.0);
    std::uniform_real_distribution<double> factor(0.01, 100.0);

    for (int trial = 0; trial < 100; ++trial) {
        const int n = 4 + static_cast<int>(gen() % 40);
        std::vector<double> y(n);
        for (double& v : y) {
            v = value(gen);
        }
        const double c = factor(gen);
        std::vector<double> scaled(y);
        for (double& v : scaled) {
            v *= c;
        }

        const int b = 2 + static_cast<int>(gen() % (n - 1));
        const SampleSplit split = SampleSplit::atBreak(b, n);
        const DescriptiveStats base = pctChangeStats(TimeSeries(y), split);
        const DescriptiveStats same = pctChangeStats(TimeSeries(scaled), split);

        REQUIRE_THAT(same.mean_pct_change_in, Catch::Matchers::WithinAbs(base.mean_pct_change_in, 1e-9));
        REQUIRE_THAT(same.mean_pct_change_out, Catch::Matchers::WithinAbs(base.mean_pct_change_out, 1e-9));
        REQUIRE_THAT(same.mean_pct_change_all, Catch::Matchers::WithinAbs(base.mean_pct_change_all, 1e-9));
        REQUIRE_THAT(same.sd_pct_change, Catch::Matchers::WithinAbs(base.sd_pct_change, 1e-9));
    }
}

TEST_CASE("splitAtFinalBreak uses only the last break", "[time_series]") {
    const TimeSeries series(std::vector<double>(100, 1.0));

    SECTION("an empty break list asks the caller for an explicit split") {
        try {
            splitAtFinalBreak(series, {});
            FAIL("expected invalid_argument");
        } catch (const std::invalid_argument& e) {
            REQUIRE_THAT(e.what(), Catch::Matchers::ContainsSubstring("explicit split"));
        }
    }

    SECTION("earlier breaks are ignored") {
        const SampleSplit split = splitAtFinalBreak(series, {20, 50});
        REQUIRE(split.break_index == 50);
        REQUIRE(split.in_sample_len == 50);
        REQUIRE(split.out_sample_len == 50);
    }

    SECTION("the final break must leave room on both sides") {
        REQUIRE_THROWS_AS(splitAtFinalBreak(series, {99}), std::invalid_argument);
        REQUIRE_THROWS_AS(splitAtFinalBreak(series, {1}), std::invalid_argument);
        REQUIRE_THROWS_AS(splitAtFinalBreak(series, {50, 20}), std::invalid_argument);
    }

    SECTION("the split partitions indices with no gap or overlap") {
        std::mt19937_64 gen(7u);
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 10 + static_cast<int>(gen() % 100);
            const int b = 2 + static_cast<int>(gen() % (n - 3));
            const SampleSplit split =
                splitAtFinalBreak(TimeSeries(std::vector<double>(n, 1.0)), {b});
            REQUIRE(split.in_sample_len == b);
            REQUIRE(split.in_sample_len + split.out_sample_len == n);
        }
    }
}
