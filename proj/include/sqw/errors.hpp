#pragma once

#include <stdexcept>
#include <string>

namespace sqw {

/// Invalid user-supplied input (bad config field, bad pattern string, ...).
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A function was called outside its precondition (dimension mismatch,
/// non-Hermitian input to a Hermitian routine, index out of range).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The integrator left the physical state space. The CLI maps this to exit
/// code 3; the usual remedy is a smaller time step.
class DiagnosticsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A coined walk was asked to use a coin that is not unitary.
class NonUnitaryCoin : public std::runtime_error {
public:
    NonUnitaryCoin(double deviation)
        : std::runtime_error("coin is not unitary: max |C^dag C - I| = " + std::to_string(deviation)),
          deviation_(deviation) {}

    double deviation() const noexcept { return deviation_; }

private:
    double deviation_;
};

} // namespace sqw
