#pragma once

#include <stdexcept>
#include <string>

namespace atm {

// Typed error categories. The CLI maps each category to a distinct exit code.
enum class errc {
  ok = 0,
  parse_error = 2,          // malformed spec file / word syntax
  invalid_argument = 3,     // bad family name, parameter out of range, ...
  cap_exceeded = 4,         // word too long for raw closure, Garside set too large
  reducible_monoid = 5,     // operation requires an irreducible monoid
  structural_error = 6,     // violated hypothesis (no root in (0,1), ambiguous lcm, ...)
  inconsistency = 7,        // two independent computations disagree
  io_error = 8,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace atm
