#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gssa/time_series.hpp"

namespace gssa {

namespace detail {

/// Prefix-sum backed SSR of a constant-mean fit over y[i..j] (0-based, inclusive).
class SegmentCost {
public:
    explicit SegmentCost(const std::vector<double>& y)
        : sum_(y.size() + 1, 0.0), sum_sq_(y.size() + 1, 0.0) {
        for (std::size_t i = 0; i < y.size(); ++i) {
            sum_[i + 1] = sum_[i] + y[i];
            sum_sq_[i + 1] = sum_sq_[i] + y[i] * y[i];
        }
    }

    double operator()(int i, int j) const {
        const double n = static_cast<double>(j - i + 1);
        const double s = sum_[j + 1] - sum_[i];
        const double ss = sum_sq_[j + 1] - sum_sq_[i];
        return std::max(0.0, ss - s * s / n);
    }

private:
    std::vector<double> sum_;
    std::vector<double> sum_sq_;
};

} // namespace detail

/**
 * @brief Detect structural breaks as the SSR-minimizing segmentation into
 *        constant-mean pieces.
 *
 * For each break count m in 0..max_breaks the minimal total sum of squared
 * residuals over all segmentations with segments of at least min_segment
 * observations is found by dynamic programming. The number of breaks is then
 * selected by BIC(m) = n*ln(SSR_m/n) + (2m+2)*ln(n); segmentations that fit
 * exactly (SSR_m <= 1e-12 * SSR_0) short-circuit to the smallest such m.
 * Ties are broken by the lexicographically earliest break vector.
 *
 * A break at position b (1-based) means the segments [1..b] and [b+1..N];
 * the returned list holds the last index of every segment but the final one.
 */
inline std::vector<int> detectBreaks(const TimeSeries& series, int max_breaks, int min_segment) {
    const int n = static_cast<int>(series.size());
    if (max_breaks < 0) {
        throw std::invalid_argument("detectBreaks: max_breaks must be >= 0");
    }
    if (min_segment < 2) {
        throw std::invalid_argument("detectBreaks: min_segment must be >= 2");
    }
    if (max_breaks * min_segment > n) {
        throw std::invalid_argument("detectBreaks: max_breaks * min_segment exceeds the series length");
    }
    if (max_breaks == 0) {
        return {};
    }

    const detail::SegmentCost cost(series.values());
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // best[k][i] = minimal SSR covering the suffix y[i..n-1] with exactly k breaks.
    // Suffix orientation lets the reconstruction below pick the earliest break
    // first at equal cost.
    const int kmax = std::min(max_breaks, n / min_segment - 1);
    std::vector<std::vector<double>> best(std::max(kmax, 0) + 1, std::vector<double>(n + 1, kInf));
    for (int i = 0; i + min_segment <= n; ++i) {
        best[0][i] = cost(i, n - 1);
    }
    for (int k = 1; k <= kmax; ++k) {
        for (int i = 0; i + (k + 1) * min_segment <= n; ++i) {
            double b = kInf;
            // segment y[i..j], then k-1 more breaks in the suffix from j+1
            for (int j = i + min_segment - 1; j + k * min_segment <= n - 1; ++j) {
                const double c = cost(i, j) + best[k - 1][j + 1];
                if (c < b) {
                    b = c;
                }
            }
            best[k][i] = b;
        }
    }

    const double sst = best[0][0];
    const double exact_tol = 1e-12 * sst;

    int chosen = 0;
    double chosen_bic = kInf;
    for (int k = 0; k <= kmax; ++k) {
        const double ssr = best[k][0];
        if (!std::isfinite(ssr)) {
            continue;
        }
        if (ssr <= exact_tol) {
            chosen = k;
            break; // smallest exact fit wins
        }
        const double bic = n * std::log(ssr / n) + (2.0 * k + 2.0) * std::log(static_cast<double>(n));
        if (bic < chosen_bic) {
            chosen_bic = bic;
            chosen = k;
        }
    }

    // Reconstruct the earliest argmin: scan candidate split points left to
    // right, keeping the first that attains the optimum at each level.
    std::vector<int> breaks;
    breaks.reserve(chosen);
    int i = 0;
    for (int k = chosen; k >= 1; --k) {
        double b = kInf;
        int arg = -1;
        for (int j = i + min_segment - 1; j + k * min_segment <= n - 1; ++j) {
            const double c = cost(i, j) + best[k - 1][j + 1];
            if (c < b) {
                b = c;
                arg = j;
            }
        }
        breaks.push_back(arg + 1); // 1-based last index of the segment
        i = arg + 1;
    }
    return breaks;
}

} // namespace gssa
