#pragma once

#include <iosfwd>

namespace denise::cli {

// Exit codes: 0 success, 1 IO/format/usage error, 2 unsupported language.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUnsupportedLanguage = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        std::istream& in);

}  // namespace denise::cli
