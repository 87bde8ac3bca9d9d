#pragma once

#include <stdexcept>
#include <string>

namespace scd {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameters outside the supported envelope or mutually inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Array lengths or matrix shapes that do not fit the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A size guard was exceeded (naive DFT length, in-memory caps).
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Arguments outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace scd
