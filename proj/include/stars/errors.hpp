#pragma once

#include <stdexcept>
#include <string>

namespace stars {

/// Bad argument to an API call (wrong dimension, non-positive constant, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configuration that violates a modelling assumption, e.g. relative noise
/// whose support reaches -1.
class ConfigRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative noise cannot be estimated where the signal is buried in noise.
class SignalDominated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EstimationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver produced a non-finite iterate or step.
class TrialAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stars
