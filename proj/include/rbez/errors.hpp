#pragma once

#include <stdexcept>
#include <string>

namespace rbez {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed files, arguments outside an operation's domain.
class InputError : public Error {
 public:
  using Error::Error;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class UnsupportedError : public InputError {
 public:
  using InputError::InputError;
};

class InvalidWeightError : public InputError {
 public:
  using InputError::InputError;
};

// Numerical invalidity: the data is well formed but the geometry is unusable.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DegenerateElementError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateWeightError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InvalidElementError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RankDeficientError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NothingToOptimizeError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace rbez
