#pragma once

#include <cmath>
#include <random>
#include <vector>

namespace testsupport {

inline std::vector<double> randomSeries(std::mt19937_64& gen, int n, double lo = -10.0,
                                        double hi = 10.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> y(n);
    for (double& v : y) {
        v = dist(gen);
    }
    return y;
}

inline std::vector<double> cosineSeries(int n, double omega, double amplitude = 1.0,
                                        double phase = 0.0) {
    std::vector<double> y(n);
    for (int t = 0; t < n; ++t) {
        y[t] = amplitude * std::cos(omega * (t + 1) + phase); // periods are 1-based
    }
    return y;
}

inline std::vector<double> noisySine(std::mt19937_64& gen, int n, double period, double sigma) {
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<double> y(n);
    for (int t = 0; t < n; ++t) {
        y[t] = std::sin(2.0 * M_PI * (t + 1) / period) + noise(gen);
    }
    return y;
}

} // namespace testsupport
