#pragma once

#include <stdexcept>

namespace tsci {

// Bad input: malformed data, impossible configuration, contract violations.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Estimation became numerically impossible (degenerate folds, absorbed
// instruments, rank collapse). Recoverable at the multi-split level.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tsci
