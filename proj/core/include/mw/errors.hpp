#pragma once

#include <stdexcept>
#include <string>

namespace mw {

/// Raised for malformed arguments: dimension mismatches, out-of-grid cubes,
/// non-SPD weights, unparsable files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an operation is asked for a mode it does not implement.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mw
