#pragma once

#include <iosfwd>

namespace csot::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitNotConverged = 2;

// Entry point of the `csot` tool. Errors are reported as one line on `err`
// of the form "E_TAG: message".
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace csot::cli
