#pragma once

#include <stdexcept>
#include <string>

namespace plans {

/// Malformed caller input: bad sizes, out-of-range parameters, unknown names.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Matrix shapes or indices that do not conform.
class DimensionError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// An exact inverse was required but the matrix is singular.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An estimate was requested from an entry that has never been sampled.
class InsufficientSamplesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input files that cannot be parsed or violate a model invariant.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace plans
