#pragma once

#include <stdexcept>
#include <string>

namespace noshlab {

/// Malformed or out-of-domain input: bad dimensions, unknown columns, invalid
/// configuration. The CLI maps these to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An estimator specification that does not fit the data it is applied to.
class SpecError : public InputError {
 public:
  using InputError::InputError;
};

/// Numerical failure (rank deficiency, singular cross-moment matrix,
/// undefined ratio). The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace noshlab
