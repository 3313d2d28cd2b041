#pragma once

#include <stdexcept>
#include <string>

namespace sublin {

/// Malformed or out-of-contract input (bad DIMACS, bad parameters).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A checked internal invariant did not hold.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sublin
