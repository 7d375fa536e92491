#include "csot/error.hpp"

namespace csot {

std::string_view error_tag(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidInput: return "E_INPUT";
    case ErrorCode::kDimensionMismatch: return "E_DIM";
    case ErrorCode::kIo: return "E_IO";
    case ErrorCode::kRaggedRow: return "E_RAGGED";
    case ErrorCode::kNonNumeric: return "E_NONNUMERIC";
    case ErrorCode::kBadMagic: return "E_MAGIC";
    case ErrorCode::kTruncated: return "E_TRUNCATED";
    case ErrorCode::kNumerical: return "E_NUMERIC";
    case ErrorCode::kInternal: return "E_INTERNAL";
  }
  return "E_UNKNOWN";
}

void throw_error(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace csot
