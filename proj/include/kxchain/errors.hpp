#pragma once

#include <stdexcept>
#include <string>

namespace kxchain {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed instance data (bad ids, self loops, unknown JSON fields, ...).
class InvalidInstance : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented domain.
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

/// An exact solver was asked to search a region larger than its configured limit.
class ResourceBudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A runtime-checked invariant failed. Always indicates a bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace kxchain
