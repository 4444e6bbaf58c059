#pragma once

#include <stdexcept>
#include <string>

namespace obsblr {

/// A caller broke an operation's documented precondition (out-of-range
/// parameter, mismatched lengths, ...). The message names the violated bound.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Reservation period is not an integer number of slots.
class InvalidTimingError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// The input is valid but the requested quantity is undefined there
/// (for example the stationary distribution at A = 0).
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace obsblr
