#pragma once

#include <ostream>

namespace planrec::app {

// Exit codes for the planrec tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Entry point behind the `planrec` executable; streams are injectable for tests.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace planrec::app
