#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gssa/errors.hpp"
#include "gssa/rng.hpp"
#include "gssa/ssa.hpp"
#include "gssa/time_series.hpp"

namespace gssa {

/// Replication count, RNG seed, and interval level for the residual bootstrap.
struct BootstrapConfig {
    int replications = 1000;
    std::uint64_t seed = 0;
    double interval_level = 0.95;
    bool keep_replicates = false; ///< retain the full replicate-by-horizon matrix
    int threads = 0;              ///< 0 = one per hardware thread

    void validate() const {
        if (replications < 1) {
            throw std::invalid_argument("BootstrapConfig: replications must be >= 1");
        }
        if (interval_level <= 0.0 || interval_level >= 1.0) {
            throw std::invalid_argument("BootstrapConfig: interval_level must lie in (0, 1)");
        }
        if (threads < 0) {
            throw std::invalid_argument("BootstrapConfig: threads must be >= 0");
        }
    }
};

/**
 * @brief Bootstrap forecast summary.
 *
 * discrepancy is the largest per-horizon distance between the bootstrap mean
 * and the base fit's own forecast; a large value flags an unreliable base
 * forecast but no automatic verdict is attached.
 */
struct BootstrapForecast {
    std::vector<double> mean_forecasts;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<std::vector<double>> per_replicate_forecasts; ///< kept replicates, in index order
    std::vector<double> base_forecasts; ///< the unresampled fit's forecasts
    int dropped = 0;                    ///< replicates whose refit failed
    double discrepancy = 0.0;
};

namespace detail {

struct ReplicateOutcome {
    bool kept = false;
    std::vector<double> forecasts;
    std::vector<double> coefficients;
};

/**
 * Runs all replicates: resample residuals with replacement, refit with the
 * base (L, r), forecast h steps (h = 0 skips forecasting). Slots are written
 * by replicate index and reduced in index order afterwards, so the outcome
 * is independent of the thread partition.
 */
inline std::vector<ReplicateOutcome> runReplicates(const LrfModel& base, int L, int r,
                                                   const BootstrapConfig& bcfg, int h) {
    const int n = static_cast<int>(base.source.size());
    std::vector<double> residuals(n);
    for (int t = 0; t < n; ++t) {
        residuals[t] = base.source[t] - base.reconstructed[t];
    }

    const int B = bcfg.replications;
    std::vector<ReplicateOutcome> slots(B);

    auto worker = [&](int lo, int hi) {
        std::vector<double> resampled(n);
        for (int i = lo; i < hi; ++i) {
            std::mt19937_64 gen(deriveStreamSeed(bcfg.seed, static_cast<std::uint64_t>(i)));
            for (int t = 0; t < n; ++t) {
                resampled[t] =
                    base.reconstructed[t] + residuals[boundedIndex(gen, static_cast<std::size_t>(n))];
            }
            try {
                const SsaDecomposition dec = decompose(embed(TimeSeries(resampled), L));
                if (dec.d < r) {
                    continue; // refit with the base rank impossible: drop
                }
                const LrfModel refit = lrfCoefficients(dec, r);
                slots[i].coefficients = refit.coefficients;
                if (h > 0) {
                    slots[i].forecasts = forecastRecurrent(refit, h);
                }
                slots[i].kept = true;
            } catch (const NonForecastableError&) {
                // verticality >= 1 on this replicate: drop and count
            }
        }
    };

    int threads = bcfg.threads > 0 ? bcfg.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, B);
    if (threads == 1) {
        worker(0, B);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        const int chunk = (B + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int lo = t * chunk;
            const int hi = std::min(B, lo + chunk);
            pool.emplace_back([&, t, lo, hi] {
                try {
                    worker(lo, hi);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
        for (const auto& err : errors) {
            if (err) {
                std::rethrow_exception(err);
            }
        }
    }
    return slots;
}

inline int countDropped(const std::vector<ReplicateOutcome>& slots) {
    int dropped = 0;
    for (const auto& s : slots) {
        if (!s.kept) {
            ++dropped;
        }
    }
    return dropped;
}

inline void requireStability(int dropped, int B) {
    if (10 * dropped > B) {
        throw BootstrapInstabilityError("bootstrap: " + std::to_string(dropped) + " of " +
                                        std::to_string(B) +
                                        " replicates failed to refit (more than 10%)");
    }
}

/// Quantile by linear interpolation between order statistics (position
/// p*(n-1), the convention spreadsheets and R's default type use).
inline double interpolatedQuantile(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) {
        return sorted[0];
    }
    const double pos = p * static_cast<double>(n - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= n) {
        return sorted[n - 1];
    }
    const double frac = pos - static_cast<double>(i);
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

} // namespace detail

/**
 * @brief Residual-resampling bootstrap forecast.
 *
 * The series is fitted once; each replicate adds residuals resampled with
 * replacement back onto the reconstruction, refits with the same window and
 * rank, and forecasts h steps. Replicates whose refit has no usable
 * recurrence are dropped; more than 10% drops abort with
 * BootstrapInstabilityError. Per-replicate RNG streams are derived from the
 * seed and replicate index, so results are bit-identical for a given seed
 * regardless of thread count.
 */
inline BootstrapForecast bootstrapForecast(const TimeSeries& series, const EmbeddingConfig& cfg,
                                           const BootstrapConfig& bcfg, int horizon) {
    bcfg.validate();
    if (horizon < 1) {
        throw std::invalid_argument("bootstrapForecast: horizon must be >= 1");
    }
    const int L = cfg.window_length;
    const int r = cfg.rank;
    const LrfModel base = lrfCoefficients(decompose(embed(series, L)), r);

    const std::vector<detail::ReplicateOutcome> slots =
        detail::runReplicates(base, L, r, bcfg, horizon);
    const int dropped = detail::countDropped(slots);
    detail::requireStability(dropped, bcfg.replications);
    const int kept = bcfg.replications - dropped;

    BootstrapForecast out;
    out.dropped = dropped;
    out.base_forecasts = forecastRecurrent(base, horizon);
    out.mean_forecasts.assign(horizon, 0.0);
    for (const auto& s : slots) {
        if (!s.kept) {
            continue;
        }
        for (int k = 0; k < horizon; ++k) {
            out.mean_forecasts[k] += s.forecasts[k];
        }
        if (bcfg.keep_replicates) {
            out.per_replicate_forecasts.push_back(s.forecasts);
        }
    }
    for (double& v : out.mean_forecasts) {
        v /= kept;
    }

    out.lower.resize(horizon);
    out.upper.resize(horizon);
    const double tail = 0.5 * (1.0 - bcfg.interval_level);
    std::vector<double> column(kept);
    for (int k = 0; k < horizon; ++k) {
        int idx = 0;
        for (const auto& s : slots) {
            if (s.kept) {
                column[idx++] = s.forecasts[k];
            }
        }
        std::sort(column.begin(), column.end());
        out.lower[k] = detail::interpolatedQuantile(column, tail);
        out.upper[k] = detail::interpolatedQuantile(column, 1.0 - tail);
        out.discrepancy =
            std::max(out.discrepancy, std::abs(out.mean_forecasts[k] - out.base_forecasts[k]));
    }
    return out;
}

/**
 * @brief Sampling covariance of the recurrence coefficients.
 *
 * Bootstraps the series as bootstrapForecast does, collects the refitted
 * coefficient vectors, and returns their sample covariance, symmetrized and
 * eigenvalue-floored at zero. Fewer than two kept replicates give the zero
 * matrix (no measurable variation).
 */
inline Eigen::MatrixXd lrfCoefficientCovariance(const TimeSeries& series,
                                                const EmbeddingConfig& cfg,
                                                const BootstrapConfig& bcfg) {
    bcfg.validate();
    const int L = cfg.window_length;
    const int r = cfg.rank;
    const int p = L - 1;
    const LrfModel base = lrfCoefficients(decompose(embed(series, L)), r);

    const std::vector<detail::ReplicateOutcome> slots = detail::runReplicates(base, L, r, bcfg, 0);
    const int dropped = detail::countDropped(slots);
    detail::requireStability(dropped, bcfg.replications);
    const int kept = bcfg.replications - dropped;
    if (kept < 2) {
        return Eigen::MatrixXd::Zero(p, p);
    }

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
    for (const auto& s : slots) {
        if (s.kept) {
            for (int j = 0; j < p; ++j) {
                mean(j) += s.coefficients[j];
            }
        }
    }
    mean /= kept;

    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
    for (const auto& s : slots) {
        if (!s.kept) {
            continue;
        }
        Eigen::VectorXd dev(p);
        for (int j = 0; j < p; ++j) {
            dev(j) = s.coefficients[j] - mean(j);
        }
        cov += dev * dev.transpose();
    }
    cov /= (kept - 1);
    cov = 0.5 * (cov + cov.transpose()).eval();

    // clamp the tiny negative eigenvalues accumulation noise can introduce
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    const Eigen::VectorXd floored = es.eigenvalues().cwiseMax(0.0);
    cov = es.eigenvectors() * floored.asDiagonal() * es.eigenvectors().transpose();
    return 0.5 * (cov + cov.transpose()).eval();
}

} // namespace gssa
