#pragma once

#include <stdexcept>
#include <string>

namespace ruin2d {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The model violates one of the standing assumptions.
class InvalidModel : public Error {
 public:
  using Error::Error;
};

/// The operation needs a claim law the model does not have.
class UnsupportedClaimLaw : public Error {
 public:
  using Error::Error;
};

/// Argument outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidReserve : public DomainError {
 public:
  using DomainError::DomainError;
};

class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class CutError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoRealRoot : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateRoots : public DomainError {
 public:
  using DomainError::DomainError;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of panels before reaching the tolerance.
class ToleranceNotMet : public Error {
 public:
  using Error::Error;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

class OutOfFootprint : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The point lies in the lower cone, where the one-dimensional formula applies.
class LowerCone : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace ruin2d
