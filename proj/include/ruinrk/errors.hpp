#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ruinrk {

// Base of every error thrown by the library. Callers that only need a
// message can catch this; the CLI maps the derived types to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (u < 0, h <= 0 ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Model parameters violate the net-profit condition or the scheme does not
// support the claim law.
class ModelError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NotImplementedError : public Error {
 public:
  using Error::Error;
};

class DegenerateIntervalError : public Error {
 public:
  using Error::Error;
};

class ExtrapolationError : public Error {
 public:
  using Error::Error;
};

// A time step could not be completed (singular stage system, stalled
// fixed-point iteration, non-finite value).
class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class DivergedError : public StepFailure {
 public:
  using StepFailure::StepFailure;
};

}  // namespace ruinrk
