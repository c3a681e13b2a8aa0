#pragma once

#include <stdexcept>

namespace eigensafe {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition: dimension mismatch, out-of-bounds
// action, terminal state where a live one is required.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Input data failed validation: malformed map file, non-stochastic kernel row,
// bad dataset file.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An iterative routine failed to converge or produced non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Bad command-line arguments or run configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace eigensafe
