#pragma once

#include <stdexcept>
#include <string>

namespace amlgraph {

/// Invalid run configuration (bad option values, degenerate group setups).
/// Maps to process exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (CSV schema violations, dangling
/// ids). Maps to process exit code 3.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numeric failure during training or evaluation (non-finite loss or
/// gradient). Maps to process exit code 4.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDataError = 3;
inline constexpr int kExitNumericError = 4;

}  // namespace amlgraph
