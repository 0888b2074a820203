#pragma once

#include <stdexcept>
#include <string>

namespace boolbias {

// Bad caller input: malformed strings, out-of-range parameters, schema
// violations in experiment configs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A request that is well-formed but exceeds a fixed compute/memory budget
// (exact minimization above n = 12, enumeration over too many states, ...).
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace boolbias
