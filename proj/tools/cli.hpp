#pragma once

#include <iosfwd>

namespace qortho::cli {

// Exit codes: 0 passed / evaluated, 1 check failed, 2 invalid input.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInvalid = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qortho::cli
