#pragma once

#include <stdexcept>
#include <string>

namespace fractalwave {

/// Bad user input: out-of-range parameter, unknown label, malformed file.
struct validation_error : std::invalid_argument {
    explicit validation_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Inconsistent structure: gluing referencing an unknown point, disconnected
/// complex, singular interior block.
struct structural_error : std::runtime_error {
    explicit structural_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A computation left its supported regime (non-PSD noise covariance after
/// cleanup, divergent series requested as a finite quantity).
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace fractalwave
