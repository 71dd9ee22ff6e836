#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "gssa/errors.hpp"
#include "gssa/forecast_record.hpp"
#include "gssa/time_series.hpp"

namespace gssa {

/// Root mean square error over a nonempty set of forecast records.
inline double rmse(const ForecastTable& records) {
    if (records.empty()) {
        throw std::invalid_argument("rmse needs at least one forecast record");
    }
    double sum_sq = 0.0;
    for (const ForecastRecord& r : records) {
        const double e = r.forecast - r.actual;
        sum_sq += e * e;
    }
    return std::sqrt(sum_sq / static_cast<double>(records.size()));
}

/// Ratio rmse(challenger) / rmse(baseline) over record sets aligned on
/// (origin, horizon). A value below 1 means the challenger wins. Two sets
/// with zero error each are equally perfect and score 1; a zero baseline
/// against a fallible challenger has no finite ratio.
inline double rrmse(const ForecastTable& challenger, const ForecastTable& baseline) {
    if (challenger.empty() || baseline.empty()) {
        throw std::invalid_argument("rrmse needs nonempty record sets");
    }
    if (challenger.size() != baseline.size()) {
        throw std::invalid_argument("rrmse record sets differ in length: " +
                                    std::to_string(challenger.size()) + " vs " +
                                    std::to_string(baseline.size()));
    }
    for (std::size_t i = 0; i < challenger.size(); ++i) {
        if (challenger[i].origin != baseline[i].origin ||
            challenger[i].horizon != baseline[i].horizon) {
            throw std::invalid_argument("rrmse record sets misaligned at position " +
                                        std::to_string(i));
        }
    }
    const double num = rmse(challenger);
    const double den = rmse(baseline);
    if (den == 0.0) {
        if (num == 0.0) {
            return 1.0;
        }
        throw InfiniteRatioError("baseline RMSE is zero but the challenger's is " +
                                 std::to_string(num));
    }
    return num / den;
}

namespace detail {

inline int signum(double x) { return (x > 0.0) - (x < 0.0); }

} // namespace detail

/// Fraction of records whose forecast moves in the same direction as the
/// actual outcome, both measured against the last observation before the
/// target period. A zero predicted change only counts when the actual
/// change is zero too.
inline double directionOfChange(const ForecastTable& records, const TimeSeries& actuals) {
    if (records.empty()) {
        throw std::invalid_argument("direction of change needs at least one record");
    }
    long correct = 0;
    for (const ForecastRecord& r : records) {
        const int prev_period = r.origin + r.horizon - 1;
        if (prev_period < 1 || prev_period > static_cast<int>(actuals.size())) {
            throw std::invalid_argument(
                "no previous actual for origin " + std::to_string(r.origin) + " horizon " +
                std::to_string(r.horizon) + ": series holds " + std::to_string(actuals.size()) +
                " observations");
        }
        const double prev = actuals[prev_period - 1];
        if (detail::signum(r.forecast - prev) == detail::signum(r.actual - prev)) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(records.size());
}

/// Outcome of the small-sample-corrected Diebold-Mariano comparison.
/// `degenerate` marks a loss differential without variance, reported as
/// equal accuracy.
struct DmResult {
    double statistic = 0.0;
    double p_value = 1.0;
    bool degenerate = false;
};

/// Equal-accuracy test on two squared-error loss series at horizon h:
/// the mean loss differential is studentized by its long-run variance
/// (autocovariances truncated at lag h-1), rescaled by the small-sample
/// factor sqrt((n + 1 - 2h + h(h-1)/n) / n), and referred to a Student-t
/// distribution with n-1 degrees of freedom, two-sided.
inline DmResult modifiedDmTest(const std::vector<double>& errors_a,
                               const std::vector<double>& errors_b, int h) {
    if (errors_a.size() != errors_b.size()) {
        throw std::invalid_argument("error vectors differ in length");
    }
    const int n = static_cast<int>(errors_a.size());
    if (n < 4) {
        throw std::invalid_argument("the test needs at least 4 forecast errors, got " +
                                    std::to_string(n));
    }
    if (h < 1) {
        throw std::invalid_argument("horizon must be at least 1");
    }

    std::vector<double> d(n);
    for (int t = 0; t < n; ++t) {
        d[t] = errors_a[t] * errors_a[t] - errors_b[t] * errors_b[t];
    }
    double mean = 0.0;
    for (const double v : d) {
        mean += v;
    }
    mean /= n;

    auto autocov = [&](int lag) {
        double acc = 0.0;
        for (int t = lag; t < n; ++t) {
            acc += (d[t] - mean) * (d[t - lag] - mean);
        }
        return acc / n;
    };

    const double gamma0 = autocov(0);
    if (gamma0 == 0.0) {
        return DmResult{0.0, 1.0, true};
    }
    double long_run = gamma0;
    for (int lag = 1; lag < h && lag < n; ++lag) {
        long_run += 2.0 * autocov(lag);
    }
    // the truncated kernel can turn the estimate negative; retreat to the
    // lag-0 variance rather than produce an imaginary denominator
    if (long_run <= 0.0) {
        long_run = gamma0;
    }
    const double dm = mean / std::sqrt(long_run / n);

    const double correction_sq =
        (n + 1.0 - 2.0 * h + static_cast<double>(h) * (h - 1.0) / n) / n;
    const double statistic = correction_sq > 0.0 ? dm * std::sqrt(correction_sq) : 0.0;

    const boost::math::students_t_distribution<double> reference(n - 1.0);
    const double p_value =
        2.0 * boost::math::cdf(boost::math::complement(reference, std::abs(statistic)));
    return DmResult{statistic, p_value, false};
}

/// One step of an empirical CDF: the sample value and the cumulative
/// fraction of samples at or below it.
struct EcdfPoint {
    double error = 0.0;
    double cum_fraction = 0.0;
};

/// Plot-ready empirical CDF of absolute errors: samples sorted ascending,
/// the k-th paired with k/n. Repeated values appear once per sample, so the
/// last pair at a value carries its full cumulative fraction.
inline std::vector<EcdfPoint> ecdfPoints(std::vector<double> abs_errors) {
    if (abs_errors.empty()) {
        throw std::invalid_argument("an empirical CDF needs at least one sample");
    }
    std::sort(abs_errors.begin(), abs_errors.end());
    std::vector<EcdfPoint> points(abs_errors.size());
    const double n = static_cast<double>(abs_errors.size());
    for (std::size_t k = 0; k < abs_errors.size(); ++k) {
        points[k] = EcdfPoint{abs_errors[k], static_cast<double>(k + 1) / n};
    }
    return points;
}

} // namespace gssa
