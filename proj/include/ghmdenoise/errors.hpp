#pragma once

#include <stdexcept>
#include <string>

namespace ghmdenoise {

/// Failure to read or write a file, including malformed input files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A PGM file that opened but could not be decoded.
class FormatError : public IoError {
 public:
  using IoError::IoError;
};

/// Arguments that violate a documented precondition (geometry, parameters,
/// mismatched dimensions).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ghmdenoise
