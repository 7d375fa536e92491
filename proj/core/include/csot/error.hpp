#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace csot {

enum class ErrorCode {
  kInvalidInput,
  kDimensionMismatch,
  kIo,
  kRaggedRow,
  kNonNumeric,
  kBadMagic,
  kTruncated,
  kNumerical,
  kInternal,
};

// Short machine-parsable tag for a code, e.g. "E_DIM".
std::string_view error_tag(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void throw_error(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw_error(code, message);
}

}  // namespace csot
