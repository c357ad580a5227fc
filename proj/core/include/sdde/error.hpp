#pragma once

#include <stdexcept>
#include <string>

namespace sdde {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad shape, out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two segments or paths were built on incompatible time grids.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// The model lacks a callback required by the requested operation.
class MissingCapability : public Error {
 public:
  using Error::Error;
};

}  // namespace sdde
