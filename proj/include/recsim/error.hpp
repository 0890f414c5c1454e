#pragma once

#include <stdexcept>
#include <string>

namespace recsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was not met by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Input data (edge lists, ratings files, snapshots, configs) is malformed.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

}  // namespace recsim
