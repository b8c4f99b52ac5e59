#pragma once

#include <stdexcept>
#include <string>

namespace dkz {

/// Bad input: wrong dimensions, indices out of range, invalid parameters.
/// The CLI maps these to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A computation that started on valid input but could not finish to the
/// requested accuracy. The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResonanceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularLambdaError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MaxStepsExceeded : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepUnderflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MatchRadiusTooSmall : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PathCollision : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class AntiStokesOnRay : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace dkz
