#pragma once

#include <stdexcept>
#include <string>

namespace coreset {

// Base class for all library errors.
class CoresetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A loss matrix entry is non-finite or outside its declared range.
class InvalidLossError : public CoresetError {
  public:
    using CoresetError::CoresetError;
};

// Vector/matrix sizes do not match.
class DimensionError : public CoresetError {
  public:
    using CoresetError::CoresetError;
};

class IndexError : public CoresetError {
  public:
    using CoresetError::CoresetError;
};

class EmptyInputError : public CoresetError {
  public:
    using CoresetError::CoresetError;
};

// Every loss row has zero norm; no Frank-Wolfe vertex candidate exists.
class DegenerateInstanceError : public CoresetError {
  public:
    using CoresetError::CoresetError;
};

// Input fails a validation rule (probability simplex, label range, ...).
class ValidationError : public CoresetError {
  public:
    using CoresetError::CoresetError;
};

class ConfigError : public CoresetError {
  public:
    using CoresetError::CoresetError;
};

// Malformed binary/JSON input; message carries the byte offset when known.
class FormatError : public CoresetError {
  public:
    using CoresetError::CoresetError;
};

class IoError : public CoresetError {
  public:
    using CoresetError::CoresetError;
};

// Training produced a non-finite loss; message names the epoch.
class DivergenceError : public CoresetError {
  public:
    using CoresetError::CoresetError;
};

// A numeric routine produced a non-finite value; message names the coordinate.
class NumericalError : public CoresetError {
  public:
    using CoresetError::CoresetError;
};

class PreconditionError : public CoresetError {
  public:
    using CoresetError::CoresetError;
};

// An oracle request would exceed its combinatorial budget.
class ResourceError : public CoresetError {
  public:
    using CoresetError::CoresetError;
};

} // namespace coreset
