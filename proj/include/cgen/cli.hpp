#pragma once

#include <iosfwd>

namespace cgen {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitHedge = 2;

/// Entry point of the `cgen` tool: `identify`, `sample`, `eval`, `gen-data`
/// and `catalog` subcommands. Reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cgen
