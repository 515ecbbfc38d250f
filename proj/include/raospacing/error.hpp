#pragma once

#include <stdexcept>
#include <string>

namespace rao {

/// Input that violates an operation's preconditions (bad sample, bad range,
/// bad flag value). The CLI maps these to exit code 2.
class invalid_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A statistical computation that could not produce a trustworthy value.
/// The CLI maps these to exit code 1.
class computation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exact coefficient arithmetic would overflow 64 bits.
class coefficient_overflow : public computation_error {
public:
    coefficient_overflow(int requested, int max_safe)
        : computation_error("coefficient table overflows 64 bits at order " +
                            std::to_string(requested) + "; max safe order is " +
                            std::to_string(max_safe)),
          max_safe_order(max_safe) {}

    int max_safe_order;
};

/// Second cumulant is not positive; the moments are inconsistent.
class degenerate_variance : public computation_error {
public:
    using computation_error::computation_error;
};

/// The truncated expansion has no usable root for the requested level.
class approximation_failure : public computation_error {
public:
    using computation_error::computation_error;
};

class quadrature_failure : public computation_error {
public:
    quadrature_failure(double previous, double last)
        : computation_error("quadrature did not converge (last estimates " +
                            std::to_string(previous) + ", " + std::to_string(last) + ")"),
          previous_estimate(previous),
          last_estimate(last) {}

    double previous_estimate;
    double last_estimate;
};

}  // namespace rao
