#pragma once

#include <stdexcept>
#include <string>

namespace qchaos {

// Bad arguments: non-finite entries, out-of-range indices, malformed partitions.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Experiment configuration that cannot be run as given.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Anything numerical that failed after the inputs were accepted.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Two distinct shells share a zeroth-order energy, so a first-order denominator vanishes.
class DegenerateDenominator : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace qchaos
