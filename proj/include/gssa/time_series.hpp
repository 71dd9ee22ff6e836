#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gssa {

/**
 * @brief Ordered real-valued observations with optional period labels.
 *
 * One index step is one observation period (e.g. one month). Labels, when
 * present, must be sortable text whose lexicographic order is chronological
 * (ISO style, "1990-01"); they are validated as strictly increasing.
 */
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values) : values_(std::move(values)) {
        validateValues();
    }

    TimeSeries(std::vector<double> values, std::vector<std::string> labels)
        : values_(std::move(values)), labels_(std::move(labels)) {
        validateValues();
        if (labels_.size() != values_.size()) {
            throw std::invalid_argument("TimeSeries: label count " + std::to_string(labels_.size()) +
                                        " does not match value count " + std::to_string(values_.size()));
        }
        for (std::size_t i = 1; i < labels_.size(); ++i) {
            if (!(labels_[i - 1] < labels_[i])) {
                throw std::invalid_argument("TimeSeries: labels must be strictly increasing, violated at position " +
                                            std::to_string(i) + " (\"" + labels_[i] + "\")");
            }
        }
    }

    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    bool hasLabels() const noexcept { return !labels_.empty(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

private:
    void validateValues() const {
        if (values_.size() < 2) {
            throw std::invalid_argument("TimeSeries: need at least 2 observations, got " +
                                        std::to_string(values_.size()));
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw std::invalid_argument("TimeSeries: non-finite value at position " + std::to_string(i));
            }
        }
    }

    std::vector<double> values_;
    std::vector<std::string> labels_;
};

/**
 * @brief Partition of a series into in-sample and out-of-sample periods.
 *
 * break_index is 1-based and inclusive: the in-sample period is [1, break_index]
 * and the out-of-sample period is [break_index + 1, N]. break_index == N is the
 * degenerate all-in-sample split used only for descriptive statistics.
 */
struct SampleSplit {
    int break_index = 0;
    int in_sample_len = 0;
    int out_sample_len = 0;

    static SampleSplit atBreak(int break_index, std::size_t n) {
        const int ni = static_cast<int>(n);
        if (break_index < 2 || break_index > ni) {
            throw std::invalid_argument("SampleSplit: break index " + std::to_string(break_index) +
                                        " out of range [2, " + std::to_string(ni) + "]");
        }
        return SampleSplit{break_index, break_index, ni - break_index};
    }
};

/// Monthly percentage-change summary of a series around a sample split.
struct DescriptiveStats {
    double mean_pct_change_in = 0.0;
    double mean_pct_change_out = 0.0;
    double mean_pct_change_all = 0.0;
    double sd_pct_change = 0.0;
};

/**
 * @brief Descriptive statistics of the percentage-change series 100*(y_t - y_{t-1})/y_{t-1}.
 *
 * The change at period t belongs to the in-sample range when t <= break_index
 * and to the out-of-sample range otherwise. Means over empty ranges are 0.
 * The standard deviation is the sample SD (divisor n-1) over the full range.
 */
inline DescriptiveStats pctChangeStats(const TimeSeries& series, const SampleSplit& split) {
    const auto& y = series.values();
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (y[i] == 0.0) {
            throw std::domain_error("pctChangeStats: zero value at position " + std::to_string(i) +
                                    " (percentage change undefined)");
        }
    }
    if (split.in_sample_len + split.out_sample_len != static_cast<int>(n)) {
        throw std::invalid_argument("pctChangeStats: split does not cover the series");
    }

    std::vector<double> changes(n - 1);
    for (std::size_t t = 1; t < n; ++t) {
        changes[t - 1] = 100.0 * (y[t] - y[t - 1]) / y[t - 1];
    }

    // changes[k] ends at 1-based period k+2; it is in-sample iff that period
    // is <= break_index, i.e. k <= break_index - 2.
    const int last_in = split.break_index - 2;

    double sum_in = 0.0, sum_out = 0.0, sum_all = 0.0;
    int n_in = 0, n_out = 0;
    for (std::size_t k = 0; k < changes.size(); ++k) {
        sum_all += changes[k];
        if (static_cast<int>(k) <= last_in) {
            sum_in += changes[k];
            ++n_in;
        } else {
            sum_out += changes[k];
            ++n_out;
        }
    }

    DescriptiveStats stats;
    const std::size_t m = changes.size();
    stats.mean_pct_change_all = sum_all / static_cast<double>(m);
    stats.mean_pct_change_in = n_in > 0 ? sum_in / n_in : 0.0;
    stats.mean_pct_change_out = n_out > 0 ? sum_out / n_out : 0.0;

    if (m > 1) {
        double ss = 0.0;
        for (double c : changes) {
            const double dev = c - stats.mean_pct_change_all;
            ss += dev * dev;
        }
        stats.sd_pct_change = std::sqrt(ss / static_cast<double>(m - 1));
    }
    return stats;
}

/**
 * @brief Derive the sample split from a list of detected break positions.
 *
 * Uses only the final break: the in-sample period runs up to and including it.
 * The break list must be sorted ascending and the final break must leave at
 * least two observations after it.
 */
inline SampleSplit splitAtFinalBreak(const TimeSeries& series, const std::vector<int>& breaks) {
    if (breaks.empty()) {
        throw std::invalid_argument("splitAtFinalBreak: no breaks detected; supply an explicit split instead");
    }
    if (!std::is_sorted(breaks.begin(), breaks.end())) {
        throw std::invalid_argument("splitAtFinalBreak: break list must be sorted ascending");
    }
    const int n = static_cast<int>(series.size());
    const int b = breaks.back();
    if (b < 2) {
        throw std::invalid_argument("splitAtFinalBreak: final break " + std::to_string(b) +
                                    " leaves fewer than 2 in-sample observations");
    }
    if (b >= n - 1) {
        throw std::invalid_argument("splitAtFinalBreak: final break " + std::to_string(b) +
                                    " leaves fewer than 2 out-of-sample observations (N=" + std::to_string(n) + ")");
    }
    return SampleSplit::atBreak(b, series.size());
}

} // namespace gssa
