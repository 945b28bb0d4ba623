#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace nhgwp {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: inconsistent dimensions, violated preconditions, malformed
/// scenario files. The CLI maps these to exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The numerics went somewhere they cannot recover from. Exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};

class PreconditionViolation : public InputError {
 public:
  using InputError::InputError;
};

class ValidationError : public InputError {
 public:
  ValidationError(std::string key, const std::string& what)
      : InputError("invalid value for '" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Im(alpha) is not positive definite, so the Gaussian cannot be normalized.
class NonNormalizable : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularTransform : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A quantity that must be real picked up an imaginary part above tolerance.
class RealityViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ExponentOverflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SpectralInstability : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BoundaryContamination : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ZeroNorm : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace nhgwp
