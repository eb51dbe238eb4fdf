#pragma once

#include <stdexcept>
#include <string>

namespace rrie {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: dimensions, parameter ranges, malformed config or files.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not produce a trustworthy value.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Argument outside the attainable range of a transform (no extrapolation).
class OutOfRange : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rrie
