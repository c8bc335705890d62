#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace latram {

// Arguments violate a documented precondition.
class invalid_input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A search or enumeration ran out of its configured budget. This is NOT a
// negative answer: callers deciding Ramsey-type verdicts must keep
// "budget exceeded" distinct from "absent".
class resource_limit_error : public std::runtime_error {
 public:
  explicit resource_limit_error(const std::string& what,
                                std::uint64_t partial = 0)
      : std::runtime_error(what), partial_count(partial) {}

  // How far we got before giving up (items emitted, colorings scanned, ...).
  std::uint64_t partial_count;
};

// The operation's hypothesis does not hold for this input (e.g. the red
// subposet is too tall for the antichain extraction).
class not_applicable_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace latram
