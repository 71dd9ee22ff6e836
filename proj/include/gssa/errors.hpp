#pragma once

#include <stdexcept>
#include <string>

namespace gssa {

/// Thrown when the selected eigenspace has verticality >= 1 and no linear
/// recurrence exists for it.
class NonForecastableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when more than 10% of bootstrap replicates fail to refit.
class BootstrapInstabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a recursion produces a non-finite intermediate; carries the
/// time index at which the failure occurred.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, long time_index)
        : std::runtime_error(what), time_index_(time_index) {}

    long timeIndex() const noexcept { return time_index_; }

private:
    long time_index_;
};

/// Thrown by rrmse when the denominator RMSE is zero but the numerator is not.
class InfiniteRatioError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace gssa
