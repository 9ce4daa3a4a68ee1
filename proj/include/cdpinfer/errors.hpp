#pragma once

#include <stdexcept>
#include <string>

namespace cdp {

// Raised when user-supplied data (files, columns, sample sizes) is unusable.
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a computation fails numerically (singular systems, degenerate
// draws, non-finite intermediate values).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cdp
