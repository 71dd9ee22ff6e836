#pragma once

// Brute-force reference for break detection: enumerates every segmentation
// directly and scores segments with a two-pass mean/SSR loop, sharing no code
// with the production dynamic program.

#include <cmath>
#include <limits>
#include <vector>

namespace testsupport {

inline double segmentSsrDirect(const std::vector<double>& y, int i, int j) {
    double mean = 0.0;
    for (int t = i; t <= j; ++t) {
        mean += y[t];
    }
    mean /= (j - i + 1);
    double ssr = 0.0;
    for (int t = i; t <= j; ++t) {
        ssr += (y[t] - mean) * (y[t] - mean);
    }
    return ssr;
}

// All break vectors with exactly m breaks, lexicographic order. A break at
// 1-based position b ends a segment at index b.
inline void enumerateBreakVectors(int n, int m, int min_segment, int start, std::vector<int>& cur,
                                  std::vector<std::vector<int>>& out) {
    if (m == 0) {
        if (n - start + 1 >= min_segment) {
            out.push_back(cur);
        }
        return;
    }
    for (int b = start + min_segment - 1; b <= n - m * min_segment; ++b) {
        cur.push_back(b);
        enumerateBreakVectors(n, m - 1, min_segment, b + 1, cur, out);
        cur.pop_back();
    }
}

inline double totalSsr(const std::vector<double>& y, const std::vector<int>& breaks) {
    const int n = static_cast<int>(y.size());
    double total = 0.0;
    int start = 0;
    for (int b : breaks) {
        total += segmentSsrDirect(y, start, b - 1);
        start = b;
    }
    total += segmentSsrDirect(y, start, n - 1);
    return total;
}

/// Exhaustive-search counterpart of the production break detector: minimal
/// SSR per break count (first minimizer in lexicographic order), then BIC
/// selection with the exact-fit short-circuit.
inline std::vector<int> bruteForceBreaks(const std::vector<double>& y, int max_breaks,
                                         int min_segment) {
    const int n = static_cast<int>(y.size());
    constexpr double kInf = std::numeric_limits<double>::infinity();

    std::vector<std::vector<int>> best_per_m;
    std::vector<double> ssr_per_m;
    for (int m = 0; m <= max_breaks; ++m) {
        std::vector<std::vector<int>> candidates;
        std::vector<int> cur;
        enumerateBreakVectors(n, m, min_segment, 1, cur, candidates);
        double best = kInf;
        std::vector<int> arg;
        for (const auto& breaks : candidates) {
            const double ssr = totalSsr(y, breaks);
            if (ssr < best) {
                best = ssr;
                arg = breaks;
            }
        }
        best_per_m.push_back(arg);
        ssr_per_m.push_back(best);
    }

    const double sst = ssr_per_m[0];
    int chosen = 0;
    double chosen_bic = kInf;
    for (int m = 0; m <= max_breaks; ++m) {
        if (!std::isfinite(ssr_per_m[m])) {
            continue;
        }
        if (ssr_per_m[m] <= 1e-12 * sst) {
            chosen = m;
            break;
        }
        const double bic =
            n * std::log(ssr_per_m[m] / n) + (2.0 * m + 2.0) * std::log(static_cast<double>(n));
        if (bic < chosen_bic) {
            chosen_bic = bic;
            chosen = m;
        }
    }
    return best_per_m[chosen];
}

} // namespace testsupport
