#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gssa/errors.hpp"
#include "gssa/forecast_record.hpp"
#include "gssa/ssa.hpp"
#include "gssa/time_series.hpp"

namespace gssa {

/**
 * @brief Settings for the adaptive-coefficient (state-space) forecaster.
 *
 * smoothing_factor scales the process noise injected into the gradient
 * random walks: the diagonal of Sigma_V is smoothing_factor * sigma^2_eps.
 * Larger values let coefficients adapt faster at the cost of noisier
 * updates. diff_lag is the lag of the differences driving the gradient
 * terms (12 treats them as yearly differences on monthly data).
 *
 * observation_noise overrides sigma^2_eps; when unset it is taken from the
 * fitted model's residual variance.
 */
struct GssaConfig {
    double smoothing_factor = 1e-4;
    int diff_lag = 1;
    std::optional<double> observation_noise;

    /// smoothing_factor must lie in [1e-8, 1e-1]; exactly 0 is accepted as a
    /// test-only override that disables process noise entirely.
    void validate() const {
        if (smoothing_factor != 0.0 &&
            (smoothing_factor < 1e-8 || smoothing_factor > 1e-1)) {
            throw std::invalid_argument("GssaConfig: smoothing_factor " +
                                        std::to_string(smoothing_factor) +
                                        " outside [1e-8, 1e-1]");
        }
        if (diff_lag < 1) {
            throw std::invalid_argument("GssaConfig: diff_lag must be >= 1");
        }
        if (observation_noise && *observation_noise <= 0.0) {
            throw std::invalid_argument("GssaConfig: observation_noise must be positive");
        }
    }
};

/**
 * @brief Filter state: stacked coefficients and gradients with their
 *        covariance, plus the observation history the recursion reads.
 *
 * theta = (phi_1..phi_{L-1}, gamma_1..gamma_{L-1}). C is the covariance of
 * the estimation error, kept symmetric by construction. history holds
 * observed values oldest first; the recursion needs at least L-1+diff_lag
 * of them to build its transition and measurement rows.
 */
struct GssaState {
    Eigen::VectorXd theta;
    Eigen::MatrixXd C;
    long t = 0;                   ///< observations consumed so far
    std::vector<double> history;  ///< observed values, most recent last
    double observation_noise = 0.0;

    int lagCount() const { return static_cast<int>(theta.size()) / 2; }
};

/**
 * @brief Start the filter from a fitted recurrence.
 *
 * Coefficients begin at the fitted phi's and all gradients at zero (the
 * in-sample fit is already optimal, so no adaptation pressure exists yet).
 * C is block-diagonal: the fitted coefficient covariance in the upper-left
 * block, zeros for the gradient block. The observation history is seeded
 * with the in-sample values.
 */
inline GssaState initState(const LrfModel& model, const GssaConfig& gcfg) {
    gcfg.validate();
    const int p = static_cast<int>(model.coefficients.size());
    GssaState state;
    state.theta = Eigen::VectorXd::Zero(2 * p);
    for (int j = 0; j < p; ++j) {
        state.theta(j) = model.coefficients[j];
    }
    state.C = Eigen::MatrixXd::Zero(2 * p, 2 * p);
    state.C.topLeftCorner(p, p) = model.init_cov;
    state.history = model.source;
    state.observation_noise =
        gcfg.observation_noise ? *gcfg.observation_noise : model.residual_variance;
    return state;
}

/// Prediction and correction terms of one filter update.
struct KalmanStepResult {
    double prediction = 0.0; ///< one-step-ahead forecast of the consumed value
    double innovation = 0.0; ///< observed minus predicted
    Eigen::VectorXd gain;    ///< applied Kalman gain column
};

/**
 * @brief Consume one observation and update coefficients and covariance.
 *
 * The transition matrix propagates each coefficient by its gradient times
 * the lagged difference Dy_{t-u} = y_{t-u} - y_{t-u-d}; gradients follow
 * random walks. The measurement row is the vector of lagged observations
 * (y_{t-1}, ..., y_{t-(L-1)}, 0, ..., 0). The update is the standard
 * predict/correct cycle
 *
 *   Phi = F C F^T + Sigma_W,   Sigma_W = blockdiag(0, smoothing * sigma^2 * I)
 *   K   = Phi H^T / (H Phi H^T + sigma^2)
 *   theta <- F theta + K (y_new - H F theta)
 *   C   <- Phi - K (H Phi H^T + sigma^2) K^T, then symmetrized.
 *
 * A vanishing innovation variance (noiseless data with zero covariance)
 * forces the gain to zero instead of dividing by zero. Non-finite results
 * raise NumericalError carrying the time index.
 */
inline KalmanStepResult kalmanStep(GssaState& state, double y_new, const GssaConfig& gcfg) {
    gcfg.validate();
    const int p = state.lagCount();
    const int m = 2 * p;
    const int d = gcfg.diff_lag;
    const int have = static_cast<int>(state.history.size());
    if (have < p + d) {
        throw std::invalid_argument("kalmanStep: history holds " + std::to_string(have) +
                                    " values but needs at least " + std::to_string(p + d));
    }

    // F: identity with the lagged differences on the upper-right diagonal.
    Eigen::MatrixXd F = Eigen::MatrixXd::Identity(m, m);
    for (int u = 1; u <= p; ++u) {
        F(u - 1, p + u - 1) = state.history[have - u] - state.history[have - u - d];
    }

    // H: lagged observations against the coefficient block only.
    Eigen::RowVectorXd H = Eigen::RowVectorXd::Zero(m);
    for (int u = 1; u <= p; ++u) {
        H(u - 1) = state.history[have - u];
    }

    const double sigma2 = state.observation_noise;
    const double q = gcfg.smoothing_factor * sigma2;

    Eigen::MatrixXd Phi = F * state.C * F.transpose();
    for (int j = p; j < m; ++j) {
        Phi(j, j) += q;
    }

    const Eigen::VectorXd theta_pred = F * state.theta;
    const double prediction = H * theta_pred;
    const double innovation = y_new - prediction;

    const Eigen::VectorXd phi_h = Phi * H.transpose();
    const double s = H * phi_h + sigma2;

    Eigen::VectorXd gain = Eigen::VectorXd::Zero(m);
    if (s > 1e-300) {
        gain = phi_h / s;
    }

    state.theta = theta_pred + gain * innovation;
    state.C = Phi - gain * s * gain.transpose();
    state.C = 0.5 * (state.C + state.C.transpose()).eval();
    state.history.push_back(y_new);
    state.t += 1;

    if (!state.theta.allFinite() || !state.C.allFinite()) {
        throw NumericalError("kalmanStep: non-finite state after update", state.t);
    }
    return KalmanStepResult{prediction, innovation, std::move(gain)};
}

namespace detail {

/// Iterate the recurrence h steps from the end of `window` (most recent
/// last) using the given coefficients; phi[0] multiplies lag 1.
inline std::vector<double> iterateRecurrence(const Eigen::VectorXd& phi,
                                             std::vector<double> window, int h) {
    const int p = static_cast<int>(phi.size());
    std::vector<double> out;
    out.reserve(h);
    for (int step = 0; step < h; ++step) {
        double next = 0.0;
        const int w = static_cast<int>(window.size());
        for (int j = 0; j < p; ++j) {
            next += phi(j) * window[w - 1 - j];
        }
        out.push_back(next);
        window.push_back(next);
    }
    return out;
}

} // namespace detail

/**
 * @brief Roll the adaptive forecaster through the out-of-sample period,
 *        starting from an already fitted in-sample recurrence.
 *
 * At each origin the current coefficient block is frozen and iterated over
 * the last L-1 observed values to produce all requested horizons; the next
 * actual observation is then consumed by kalmanStep, so later origins
 * forecast with updated coefficients. The first origin forecasts with the
 * initial coefficients, before any update.
 */
inline ForecastTable gssaForecast(const TimeSeries& series, const SampleSplit& split,
                                  const LrfModel& model, const GssaConfig& gcfg,
                                  const std::vector<int>& horizons) {
    gcfg.validate();
    if (horizons.empty()) {
        throw std::invalid_argument("gssaForecast: no horizons requested");
    }
    const int n = static_cast<int>(series.size());
    const int b = split.break_index;
    const int L = model.windowLength();
    const int max_h = *std::max_element(horizons.begin(), horizons.end());
    if (split.in_sample_len < 2 * L) {
        throw std::invalid_argument("gssaForecast: in-sample length " +
                                    std::to_string(split.in_sample_len) +
                                    " shorter than twice the window length");
    }
    if (split.out_sample_len < max_h) {
        throw std::invalid_argument("gssaForecast: out-of-sample length " +
                                    std::to_string(split.out_sample_len) +
                                    " shorter than the largest horizon " + std::to_string(max_h));
    }
    const int p = L - 1;
    if (split.in_sample_len < p + gcfg.diff_lag) {
        throw std::invalid_argument(
            "gssaForecast: in-sample too short for the difference lag " +
            std::to_string(gcfg.diff_lag));
    }
    if (static_cast<int>(model.source.size()) != split.in_sample_len) {
        throw std::invalid_argument("gssaForecast: model was not fitted on this in-sample window");
    }

    GssaState state = initState(model, gcfg);
    ForecastTable table;
    for (int origin = b; origin <= n - 1; ++origin) {
        if (origin > b) {
            kalmanStep(state, series[origin - 1], gcfg); // consume period `origin`
        }
        std::vector<double> window(series.values().begin() + (origin - p),
                                   series.values().begin() + origin);
        const Eigen::VectorXd phi = state.theta.head(p);
        const std::vector<double> path = detail::iterateRecurrence(phi, std::move(window), max_h);
        for (int h : horizons) {
            if (origin + h <= n) {
                table.push_back(ForecastRecord{origin, h, origin + h, path[h - 1],
                                               series[origin + h - 1]});
            }
        }
    }
    return table;
}

/// Convenience overload: fits the in-sample recurrence, then rolls.
inline ForecastTable gssaForecast(const TimeSeries& series, const SampleSplit& split,
                                  const EmbeddingConfig& cfg, const GssaConfig& gcfg,
                                  const std::vector<int>& horizons) {
    const std::vector<double> in_sample(series.values().begin(),
                                        series.values().begin() + split.break_index);
    const LrfModel model = lrfCoefficients(
        decompose(embed(TimeSeries(in_sample), cfg.window_length)), cfg.rank);
    return gssaForecast(series, split, model, gcfg, horizons);
}

} // namespace gssa
