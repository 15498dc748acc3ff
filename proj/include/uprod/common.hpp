// Shared basics: domain error type and small helpers.

#pragma once

#include <stdexcept>
#include <string>

namespace uprod {

// Domain errors (bad input, contract violations visible to callers).
struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw error(msg); }

// Internal invariant violations; never expected on valid inputs.
[[noreturn]] inline void internal_error(const std::string& msg) {
  throw std::logic_error("internal error: " + msg);
}

}  // namespace uprod
