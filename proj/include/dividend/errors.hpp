#ifndef DIVIDEND_ERRORS_HPP
#define DIVIDEND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dividend {

// Malformed or inconsistent input data (CLI exit code 1).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid model configuration such as an even k (CLI exit code 1).
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

// A value table has no entry and no default for a queried (a, b).
class MissingValueError : public InputError {
 public:
  using InputError::InputError;
};

// An operation was called outside its domain.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The brute-force oracle refused an instance that is too large to enumerate
// without an explicit override (CLI exit code 2).
class GuardRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dividend

#endif  // DIVIDEND_ERRORS_HPP
