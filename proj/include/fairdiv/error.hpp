#pragma once

#include <stdexcept>
#include <string>

namespace fairdiv {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input, out-of-range arguments, unsupported parameter combinations.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A requested guarantee is not achievable for the instance class.
class InfeasibleGoal : public InputError {
 public:
  using InputError::InputError;
};

/// Exhaustive enumeration would exceed the configured state cap.
class CapExceeded : public InputError {
 public:
  using InputError::InputError;
};

/// A proven invariant failed at runtime. Always an implementation bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

#define FAIRDIV_REQUIRE(cond, msg)                                   \
  do {                                                               \
    if (!(cond)) throw ::fairdiv::InputError(msg);                   \
  } while (0)

#define FAIRDIV_INVARIANT(cond, msg)                                 \
  do {                                                               \
    if (!(cond))                                                     \
      throw ::fairdiv::InvariantError(std::string("invariant: ") + (msg)); \
  } while (0)

}  // namespace fairdiv
