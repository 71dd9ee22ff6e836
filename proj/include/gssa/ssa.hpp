#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gssa/errors.hpp"
#include "gssa/time_series.hpp"

namespace gssa {

/// Window length and signal rank for an SSA fit.
struct EmbeddingConfig {
    int window_length = 0; ///< L, rows of the trajectory matrix
    int rank = 0;          ///< r, eigentriples kept as signal

    /// Checks 2 <= L and 1 <= r <= L. The conventional cap L <= N/2 is
    /// enforced by default and can be lifted, in which case only the
    /// embedding requirement L <= N-1 remains.
    void validate(std::size_t n, bool enforce_half_cap = true) const {
        if (window_length < 2) {
            throw std::invalid_argument("EmbeddingConfig: window_length must be at least 2");
        }
        if (enforce_half_cap) {
            if (2 * static_cast<std::size_t>(window_length) > n) {
                throw std::invalid_argument("EmbeddingConfig: window_length exceeds N/2");
            }
        } else if (static_cast<std::size_t>(window_length) > n) {
            throw std::invalid_argument("EmbeddingConfig: window_length exceeds N");
        }
        if (rank < 1 || rank > window_length) {
            throw std::invalid_argument("EmbeddingConfig: rank must lie in [1, window_length]");
        }
    }
};

/// Default window for monthly data: half the sample, capped at two years.
inline int defaultWindow(std::size_t n) {
    return static_cast<int>(std::min<std::size_t>(n / 2, 24));
}

/**
 * @brief Build the L x K trajectory matrix of a series, K = N-L+1.
 *
 * Column j holds the lagged window (y_j, ..., y_{j+L-1}), so anti-diagonals
 * are constant (Hankel structure).
 */
inline Eigen::MatrixXd embed(const TimeSeries& series, int L) {
    const int n = static_cast<int>(series.size());
    if (L < 2 || L > n) {
        throw std::invalid_argument("embed: window_length must lie in [2, N], got " +
                                    std::to_string(L));
    }
    const int K = n - L + 1;
    Eigen::MatrixXd X(L, K);
    for (int j = 0; j < K; ++j) {
        for (int i = 0; i < L; ++i) {
            X(i, j) = series[i + j];
        }
    }
    return X;
}

/**
 * @brief Eigentriples of the lag-covariance structure S = X X^T.
 *
 * Only the d numerically nonzero triples are retained. The source series is
 * recovered from the matrix (first row plus last column), allowing later
 * stages to compare reconstructions against the original values.
 */
struct SsaDecomposition {
    int L = 0;
    int K = 0;
    int N = 0;
    int d = 0;                            ///< numerical rank
    std::vector<double> eigenvalues;      ///< length d, descending, >= 0
    Eigen::MatrixXd eigenvectors;         ///< L x d, columns U_i, unit norm
    Eigen::MatrixXd principal_components; ///< K x d, columns V_i = X^T U_i / sqrt(lambda_i)
    std::vector<double> source;           ///< original series values, length N
};

/**
 * @brief Eigendecompose the trajectory matrix via S = X X^T.
 *
 * Eigenpairs are sorted by eigenvalue descending and the rank d counts
 * eigenvalues above lambda_1 * 1e-12. Each eigenvector has its
 * largest-magnitude component forced nonnegative so stored triples are
 * platform-independent.
 */
inline SsaDecomposition decompose(const Eigen::MatrixXd& X) {
    const int L = static_cast<int>(X.rows());
    const int K = static_cast<int>(X.cols());
    if (X.isZero(0.0)) {
        throw std::domain_error("decompose: trajectory matrix is identically zero");
    }

    const Eigen::MatrixXd S = X * X.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("decompose: eigensolver failed to converge");
    }

    // Eigen returns ascending order; traverse reversed and clamp the tiny
    // negative values a PSD matrix can acquire in floating point.
    SsaDecomposition dec;
    dec.L = L;
    dec.K = K;
    dec.N = L + K - 1;

    std::vector<double> lambda(L);
    for (int i = 0; i < L; ++i) {
        lambda[i] = std::max(0.0, solver.eigenvalues()(L - 1 - i));
    }
    const double cutoff = lambda[0] * 1e-12;
    int d = 0;
    while (d < L && lambda[d] > cutoff) {
        ++d;
    }
    dec.d = d;

    dec.eigenvalues.assign(lambda.begin(), lambda.begin() + d);
    dec.eigenvectors.resize(L, d);
    dec.principal_components.resize(K, d);
    for (int i = 0; i < d; ++i) {
        Eigen::VectorXd u = solver.eigenvectors().col(L - 1 - i);
        int arg = 0;
        for (int k = 1; k < L; ++k) {
            if (std::abs(u(k)) > std::abs(u(arg))) {
                arg = k;
            }
        }
        if (u(arg) < 0.0) {
            u = -u;
        }
        dec.eigenvectors.col(i) = u;
        dec.principal_components.col(i) = X.transpose() * u / std::sqrt(dec.eigenvalues[i]);
    }

    // X stores verbatim copies of the series, so reading the first row and
    // the last column recovers it exactly.
    dec.source.resize(dec.N);
    for (int j = 0; j < K; ++j) {
        dec.source[j] = X(0, j);
    }
    for (int i = 0; i < L; ++i) {
        dec.source[K - 1 + i] = X(i, K - 1);
    }
    return dec;
}

/// Average each anti-diagonal of M into one value; output length rows+cols-1.
inline std::vector<double> diagonalAverage(const Eigen::MatrixXd& M) {
    const int L = static_cast<int>(M.rows());
    const int K = static_cast<int>(M.cols());
    std::vector<double> out(L + K - 1, 0.0);
    std::vector<int> count(L + K - 1, 0);
    for (int j = 0; j < K; ++j) {
        for (int i = 0; i < L; ++i) {
            out[i + j] += M(i, j);
            ++count[i + j];
        }
    }
    for (std::size_t s = 0; s < out.size(); ++s) {
        out[s] /= count[s];
    }
    return out;
}

/**
 * @brief Reconstruct the signal from the first r eigentriples.
 *
 * Sums the elementary matrices sqrt(lambda_i) U_i V_i^T for i <= r and
 * Hankelises the sum by diagonal averaging.
 */
inline TimeSeries reconstruct(const SsaDecomposition& dec, int r) {
    if (r < 1 || r > dec.d) {
        throw std::invalid_argument("reconstruct: rank must lie in [1, d], got " +
                                    std::to_string(r));
    }
    Eigen::VectorXd scale(r);
    for (int i = 0; i < r; ++i) {
        scale(i) = std::sqrt(dec.eigenvalues[i]);
    }
    const Eigen::MatrixXd M = dec.eigenvectors.leftCols(r) * scale.asDiagonal() *
                              dec.principal_components.leftCols(r).transpose();
    return TimeSeries(diagonalAverage(M));
}

/**
 * @brief Linear recurrent formula fitted to an SSA decomposition.
 *
 * coefficients[0] is the weight on lag 1 (the most recent value). The
 * reconstructed series supplies the recursion seed and the in-sample fit
 * underlying residual_variance. init_cov is the prior coefficient
 * covariance handed to the adaptive-coefficient filter.
 */
struct LrfModel {
    std::vector<double> coefficients; ///< phi_1..phi_{L-1}
    double verticality = 0.0;         ///< sum of squared last eigenvector components, < 1
    TimeSeries reconstructed;
    double residual_variance = 0.0;   ///< mean squared (source - reconstructed)
    Eigen::MatrixXd init_cov;         ///< (L-1) x (L-1) symmetric PSD
    std::vector<double> source;       ///< original series values

    int windowLength() const { return static_cast<int>(coefficients.size()) + 1; }
};

/**
 * @brief Extract recurrent coefficients from the first r eigentriples.
 *
 * With pi_i the last component of U_i and Pi = sum pi_i^2, the recurrence
 * weights are (1-Pi)^{-1} sum_i pi_i * U_i-without-last-row, reindexed so the
 * first coefficient multiplies lag 1. Verticality Pi >= 1 - 1e-10 means the
 * signal cannot be continued by a recurrence and raises NonForecastableError.
 *
 * init_cov defaults to (residual_variance / sum y_t^2) * identity, a
 * deliberately weak prior; callers with bootstrap access may overwrite it
 * with a sampled coefficient covariance.
 */
inline LrfModel lrfCoefficients(const SsaDecomposition& dec, int r) {
    if (r < 1 || r > dec.d) {
        throw std::invalid_argument("lrfCoefficients: rank must lie in [1, d], got " +
                                    std::to_string(r));
    }
    const int L = dec.L;
    const int p = L - 1;

    double pi_sq = 0.0;
    for (int i = 0; i < r; ++i) {
        const double pi = dec.eigenvectors(L - 1, i);
        pi_sq += pi * pi;
    }
    if (pi_sq >= 1.0 - 1e-10) {
        throw NonForecastableError(
            "lrfCoefficients: verticality " + std::to_string(pi_sq) +
            " leaves the recurrence undefined (signal concentrated on the last lag)");
    }

    Eigen::VectorXd a = Eigen::VectorXd::Zero(p);
    for (int i = 0; i < r; ++i) {
        const double pi = dec.eigenvectors(L - 1, i);
        a += pi * dec.eigenvectors.col(i).head(p);
    }
    a /= (1.0 - pi_sq);

    LrfModel model{std::vector<double>(p), pi_sq, reconstruct(dec, r), 0.0,
                   Eigen::MatrixXd(), dec.source};
    for (int j = 0; j < p; ++j) {
        model.coefficients[j] = a(p - 1 - j); // a runs from lag L-1 down to lag 1
    }

    double ssr = 0.0;
    double energy = 0.0;
    for (int t = 0; t < dec.N; ++t) {
        const double e = dec.source[t] - model.reconstructed[t];
        ssr += e * e;
        energy += dec.source[t] * dec.source[t];
    }
    model.residual_variance = ssr / dec.N;
    model.init_cov = (model.residual_variance / energy) * Eigen::MatrixXd::Identity(p, p);
    return model;
}

/**
 * @brief Iterate the recurrence h steps past the end of the sample.
 *
 * The recursion is seeded on the last L-1 reconstructed values; each
 * forecast feeds back as input to the following steps.
 */
inline std::vector<double> forecastRecurrent(const LrfModel& model, int h) {
    if (h < 1) {
        throw std::invalid_argument("forecastRecurrent: horizon must be >= 1");
    }
    const int p = static_cast<int>(model.coefficients.size());
    if (static_cast<int>(model.reconstructed.size()) < p) {
        throw std::invalid_argument("forecastRecurrent: fewer reconstructed values than lags");
    }

    std::vector<double> window(p);
    const std::size_t n = model.reconstructed.size();
    for (int j = 0; j < p; ++j) {
        window[j] = model.reconstructed[n - p + j];
    }

    std::vector<double> out;
    out.reserve(h);
    for (int step = 0; step < h; ++step) {
        double next = 0.0;
        for (int j = 0; j < p; ++j) {
            next += model.coefficients[j] * window[p - 1 - j];
        }
        out.push_back(next);
        window.erase(window.begin());
        window.push_back(next);
    }
    return out;
}

/// Rank choice: a numerically rank-deficient spectrum is pure signal and is
/// kept whole; otherwise cut at the largest drop in log eigenvalue, which
/// separates the signal block from the noise floor.
inline int chooseRank(const SsaDecomposition& dec) {
    if (dec.d < dec.L || dec.d <= 1) {
        return std::max(dec.d, 1);
    }
    int best = 1;
    double best_gap = -1.0;
    for (int i = 0; i + 1 < dec.d; ++i) {
        const double gap = std::log(dec.eigenvalues[i]) - std::log(dec.eigenvalues[i + 1]);
        if (gap > best_gap) {
            best_gap = gap;
            best = i + 1;
        }
    }
    return best;
}

/// Embed, decompose, and extract the recurrence in one call.
inline LrfModel fitLrf(const TimeSeries& series, int L, int r) {
    const SsaDecomposition dec = decompose(embed(series, L));
    if (r > dec.d) {
        r = dec.d; // degenerate signals cap the usable rank
    }
    return lrfCoefficients(dec, r);
}

} // namespace gssa
