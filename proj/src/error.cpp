#include "hawkes/error.hpp"

namespace hawkes {

const char *error_code_name(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::kOk: return "ok";
  case ErrorCode::kDomain: return "domain";
  case ErrorCode::kDivergence: return "divergence";
  case ErrorCode::kUnboundedSearch: return "unbounded_search";
  case ErrorCode::kIntegrity: return "integrity";
  case ErrorCode::kUnsupported: return "unsupported";
  case ErrorCode::kInvariantViolation: return "invariant_violation";
  case ErrorCode::kConfig: return "config";
  case ErrorCode::kIo: return "io";
  case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

} // namespace hawkes
