#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "gssa/breaks.hpp"
#include "gssa/time_series.hpp"
#include "support/segmentation_oracle.hpp"

using gssa::detectBreaks;
using gssa::SampleSplit;
using gssa::splitAtFinalBreak;
using gssa::TimeSeries;

namespace {

std::vector<double> steps(std::initializer_list<std::pair<double, int>> levels) {
    std::vector<double> y;
    for (const auto& [value, count] : levels) {
        y.insert(y.end(), count, value);
    }
    return y;
}

} // namespace

TEST_CASE("detectBreaks argument validation", "[breaks]") {
    const TimeSeries series(std::vector<double>(20, 1.0));
    REQUIRE_THROWS_AS(detectBreaks(series, -1, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(detectBreaks(series, 2, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(detectBreaks(series, 5, 5), std::invalid_argument);
}

TEST_CASE("detectBreaks on step fixtures", "[breaks]") {
    SECTION("a constant series has nothing to explain") {
        const TimeSeries series(std::vector<double>(40, 3.25));
        REQUIRE(detectBreaks(series, 2, 2).empty());
    }

    SECTION("a single level shift is found at the step") {
        const TimeSeries series(steps({{0.0, 50}, {5.0, 50}}));
        const std::vector<int> breaks = detectBreaks(series, 1, 2);
        REQUIRE(breaks == std::vector<int>{50});
    }

    SECTION("a two-step staircase yields both breaks and no more") {
        const TimeSeries series(steps({{0.0, 30}, {3.0, 30}, {6.0, 30}}));
        const std::vector<int> breaks = detectBreaks(series, 3, 2);
        REQUIRE(breaks == std::vector<int>{30, 60});
    }

    SECTION("max_breaks = 0 returns no breaks regardless of structure") {
        const TimeSeries series(steps({{0.0, 10}, {9.0, 10}}));
        REQUIRE(detectBreaks(series, 0, 2).empty());
    }
}

TEST_CASE("detectBreaks matches an exhaustive segmentation search", "[breaks][property]") {
    std::mt19937_64 gen(123456789u);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    std::uniform_real_distribution<double> level(-5.0, 5.0);

    for (int trial = 0; trial < 120; ++trial) {
        const int n = 10 + static_cast<int>(gen() % 51); // 10..60
        const int max_breaks = static_cast<int>(gen() % 3);
        const int min_segment = 2 + static_cast<int>(gen() % 4);
        if (max_breaks * min_segment > n) {
            continue;
        }

        std::vector<double> y(n);
        const int shape = static_cast<int>(gen() % 3);
        if (shape == 0) { // pure noise
            for (double& v : y) {
                v = noise(gen);
            }
        } else { // one or two latent shifts plus noise
            const double l0 = level(gen);
            const double l1 = level(gen);
            const double l2 = level(gen);
            const int b0 = n / 3 + static_cast<int>(gen() % 3);
            const int b1 = 2 * n / 3 + static_cast<int>(gen() % 3);
            for (int t = 0; t < n; ++t) {
                double base = l0;
                if (shape == 2 && t >= b1) {
                    base = l2;
                } else if (t >= b0) {
                    base = l1;
                }
                y[t] = base + 0.1 * noise(gen);
            }
        }

        const std::vector<int> fast = detectBreaks(TimeSeries(y), max_breaks, min_segment);
        const std::vector<int> slow = testsupport::bruteForceBreaks(y, max_breaks, min_segment);
        INFO("trial " << trial << " n=" << n << " max_breaks=" << max_breaks
                      << " min_segment=" << min_segment);
        REQUIRE(fast == slow);
    }
}

TEST_CASE("detected breaks feed a gap-free sample split", "[breaks][property]") {
    std::mt19937_64 gen(42u);
    std::uniform_real_distribution<double> noise(-0.5, 0.5);

    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 100; ++trial) {
        const int n = 30 + static_cast<int>(gen() % 31);
        const int b_true = n / 2;
        std::vector<double> y(n);
        for (int t = 0; t < n; ++t) {
            y[t] = (t < b_true ? 0.0 : 4.0) + noise(gen);
        }

        const TimeSeries series(y);
        const std::vector<int> breaks = detectBreaks(series, 2, 5);
        if (breaks.empty() || breaks.back() >= n - 1 || breaks.back() < 2) {
            continue;
        }
        const SampleSplit split = splitAtFinalBreak(series, breaks);
        REQUIRE(split.in_sample_len == breaks.back());
        REQUIRE(split.in_sample_len + split.out_sample_len == n);
        ++checked;
    }
    REQUIRE(checked >= 100);
}
