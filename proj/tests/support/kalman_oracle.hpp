#pragma once

// Direct transcription of the filter update equations onto nested vectors,
// with every matrix product spelled out by hand. Validates the production
// implementation without sharing its linear algebra.

#include <cstddef>
#include <vector>

namespace testsupport {

using Dense = std::vector<std::vector<double>>;

struct NaiveFilterState {
    std::vector<double> theta;
    Dense c;
};

struct NaiveStepResult {
    NaiveFilterState state;
    double prediction = 0.0;
    double innovation = 0.0;
};

inline Dense matMul(const Dense& a, const Dense& b) {
    const std::size_t n = a.size(), k = b.size(), m = b[0].size();
    Dense out(n, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t t = 0; t < k; ++t) {
                out[i][j] += a[i][t] * b[t][j];
            }
        }
    }
    return out;
}

inline Dense transpose(const Dense& a) {
    Dense out(a[0].size(), std::vector<double>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a[0].size(); ++j) {
            out[j][i] = a[i][j];
        }
    }
    return out;
}

inline std::vector<double> matVec(const Dense& a, const std::vector<double>& x) {
    std::vector<double> out(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            out[i] += a[i][j] * x[j];
        }
    }
    return out;
}

/// One filter update evaluated term by term. history holds observed values
/// most recent last and must contain at least p + diff_lag entries, where
/// p = theta.size() / 2.
inline NaiveStepResult naiveKalmanStep(const NaiveFilterState& in,
                                       const std::vector<double>& history, double y_new,
                                       double smoothing, double sigma2, int diff_lag) {
    const int p = static_cast<int>(in.theta.size()) / 2;
    const int m = 2 * p;
    const int have = static_cast<int>(history.size());

    Dense f(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i) {
        f[i][i] = 1.0;
    }
    for (int u = 1; u <= p; ++u) {
        f[u - 1][p + u - 1] = history[have - u] - history[have - u - diff_lag];
    }

    std::vector<double> h(m, 0.0);
    for (int u = 1; u <= p; ++u) {
        h[u - 1] = history[have - u];
    }

    Dense phi = matMul(matMul(f, in.c), transpose(f));
    for (int j = p; j < m; ++j) {
        phi[j][j] += smoothing * sigma2;
    }

    const std::vector<double> theta_pred = matVec(f, in.theta);
    double prediction = 0.0;
    for (int j = 0; j < m; ++j) {
        prediction += h[j] * theta_pred[j];
    }
    const double innovation = y_new - prediction;

    const std::vector<double> phi_h = matVec(phi, h);
    double s = sigma2;
    for (int j = 0; j < m; ++j) {
        s += h[j] * phi_h[j];
    }

    std::vector<double> gain(m, 0.0);
    if (s > 1e-300) {
        for (int j = 0; j < m; ++j) {
            gain[j] = phi_h[j] / s;
        }
    }

    NaiveStepResult out;
    out.prediction = prediction;
    out.innovation = innovation;
    out.state.theta.resize(m);
    for (int j = 0; j < m; ++j) {
        out.state.theta[j] = theta_pred[j] + gain[j] * innovation;
    }
    out.state.c.assign(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            out.state.c[i][j] = phi[i][j] - gain[i] * s * gain[j];
        }
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < i; ++j) {
            const double avg = 0.5 * (out.state.c[i][j] + out.state.c[j][i]);
            out.state.c[i][j] = avg;
            out.state.c[j][i] = avg;
        }
    }
    return out;
}

} // namespace testsupport
