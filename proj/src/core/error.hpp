#pragma once

#include <stdexcept>
#include <string>

namespace periods {

// Mirrors pp_status in include/periods/periods.h; keep the numeric values in sync.
enum class ErrorCode : int {
  invalid_input = 1,
  invalid_config = 2,
  numeric = 3,
  not_proximal = 4,
  transversality = 5,
  empty_class = 6,
  resource_limit = 7,
  io = 8,
  dual_cone = 9,
  insufficient_data = 10,
  degenerate = 11,
  suite_failure = 12,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace periods
