#pragma once

#include <stdexcept>
#include <string>

namespace speclaw {

// Model or sweep parameters violate a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A schedule evaluated outside the open unit interval.
class RangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A matrix kind was requested without the model context it needs, or a
// config file is malformed.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace speclaw
