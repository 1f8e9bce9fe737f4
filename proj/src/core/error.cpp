#include "error.hpp"

namespace periods {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::invalid_config: return "config";
    case ErrorCode::numeric: return "numeric";
    case ErrorCode::not_proximal: return "not-proximal";
    case ErrorCode::transversality: return "transversality";
    case ErrorCode::empty_class: return "empty-class";
    case ErrorCode::resource_limit: return "resource-limit";
    case ErrorCode::io: return "io";
    case ErrorCode::dual_cone: return "dual-cone-violation";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::suite_failure: return "suite-failure";
  }
  return "unknown";
}

}  // namespace periods
