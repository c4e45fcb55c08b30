#pragma once

#include <stdexcept>
#include <string>

namespace qkdopt {

/// Thrown when a truncated Fock expansion loses more than the allowed
/// fraction of probability (5% by default at the spdc_state boundary).
class TruncationOverflowError : public std::runtime_error {
public:
    TruncationOverflowError(double leakage, const std::string& what)
        : std::runtime_error(what), leakage_(leakage) {}
    double leakage() const { return leakage_; }

private:
    double leakage_;
};

/// Refit / residual analysis was asked to work on too few usable rows.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A detector cannot reach the key target even at zero channel loss.
class InfeasibleDetectorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qkdopt
