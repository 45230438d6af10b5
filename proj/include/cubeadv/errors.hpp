#pragma once

#include <stdexcept>
#include <string>

namespace cubeadv {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Precondition or input-format violation.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// A configured size cap (explicit words, inclusion-exclusion events,
/// per-item expansion, decimal length) would be exceeded.
class CapExceeded : public Error {
public:
  using Error::Error;
};

/// Randomized construction gave up after the allowed number of attempts.
class RetriesExhausted : public Error {
public:
  using Error::Error;
};

/// An operation needs exact class counts but got lower-bound certificates.
class ExactnessRequired : public Error {
public:
  using Error::Error;
};

class UnknownAlgorithm : public Error {
public:
  using Error::Error;
};

/// The bounded-space contract (open bins <= declared M) was broken.
class BoundedSpaceViolation : public Error {
public:
  using Error::Error;
};

}  // namespace cubeadv
