#pragma once

#include <stdexcept>
#include <string>

namespace potlab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unusable input: unreadable file, parse failure, bad option.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Mesh topology or geometry violates a TriMesh invariant.
class GeometryError : public InputError {
 public:
  using InputError::InputError;
};

/// A documented precondition of an operation does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical step failed: singular system, empty extraction, NaN.
class ComputationError : public Error {
 public:
  using Error::Error;
};

}  // namespace potlab
