#pragma once

#include <stdexcept>
#include <string>

namespace ptpq {

// Base for everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: violated preconditions, invalid parameters, malformed scenarios.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Numerical failure while executing a valid request (non-finite state, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// File-system failure; the message carries the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ptpq
