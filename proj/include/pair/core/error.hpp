#pragma once

#include <stdexcept>
#include <string>

namespace pair {

/// Malformed or inconsistent input: bad shapes, missing roles, invalid files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite value or otherwise failed numerically.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) {
    throw InputError(message);
  }
}

}  // namespace pair
