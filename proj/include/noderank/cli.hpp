#pragma once

#include <iosfwd>

namespace noderank::cli {

// Exit codes: 0 success, 1 usage or validation error, 2 data error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one subcommand (ingest, rank, simulate, correlate, rerank, eval).
// Data goes to files or `out`; diagnostics go to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace noderank::cli
