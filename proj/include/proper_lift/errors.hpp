#pragma once

#include <stdexcept>
#include <string>

namespace proper_lift {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or config.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input parsed but violates a structural invariant (dangling cell, non-SPD metric, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Refinement or allocation would exceed the configured vertex cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Metric surgery precondition violated on some cell.
class SurgeryError : public Error {
 public:
  using Error::Error;
};

/// An embedding provider cannot satisfy the requested edge lengths.
class EmbeddingError : public Error {
 public:
  using Error::Error;
};

/// A query the closedness certificate does not cover (e.g. Q <= 0).
class UnsupportedQuery : public Error {
 public:
  using Error::Error;
};

}  // namespace proper_lift
