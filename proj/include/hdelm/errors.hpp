#pragma once

#include <stdexcept>
#include <string>

namespace hdelm {

// Bad shapes, out-of-range parameters, non-finite data.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A well-formed request this library deliberately does not handle
// (more than two split directions, C2 interface continuity, full TFC for d > 3).
class UnsupportedConfiguration : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Lookup by name failed (problem catalog).
class NotFound : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace hdelm
