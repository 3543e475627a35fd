#pragma once

#include <stdexcept>
#include <string>

namespace egorig {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input (skeleton files, motion CSV, configs). Carries a
// human-readable location when one is known.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A scenario configuration that parses but cannot be run (missing sections,
// out-of-range values, dangling references).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Domain violations on API arguments: shape mismatches, invalid rotation
// matrices, degenerate inputs.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Numerical failure, e.g. an integrator step size outside its stable region.
class StabilityError : public Error {
 public:
  using Error::Error;
};

// Filesystem failure: unreadable inputs, unwritable outputs.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace egorig
