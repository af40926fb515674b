#pragma once

#include <stdexcept>
#include <string>

namespace pcim {

enum class errc {
  bad_spec,                // unparseable / malformed input
  bad_partition,           // endpoints not strictly increasing
  non_contracting,         // some |slope| >= 1 (or declared lambda >= 1)
  escapes_domain,          // a branch image leaves [c_0, c_N]
  start_on_delta,          // orbit start lies on a piece boundary
  word_too_short,          // complexity window does not fit
  depth_budget_exceeded,   // atom count cap hit
  order_violation,         // witnessed relation breaks the partial-order laws
  bound_violation,         // a fully determined report violates a counting bound
};

const char* to_string(errc c);

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace pcim
