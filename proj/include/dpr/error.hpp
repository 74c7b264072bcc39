#pragma once

#include <stdexcept>
#include <string>

namespace dpr {

// Bad or inconsistent user-supplied configuration. CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A callee contract was violated (non-Hermitian input, inconsistent
// charge/spin branch, unknown label, ...). CLI exit code 3.
struct ContractError : std::runtime_error {
  explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: accuracy precondition not met, insufficient or
// degenerate data for a fit. CLI exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dpr
