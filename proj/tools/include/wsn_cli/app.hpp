#pragma once

#include <ostream>

namespace wsn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point behind `wsnsim`. Diagnostics go to `err`; nothing is written
/// to standard output.
int run_app(int argc, const char* const* argv, std::ostream& err);

}  // namespace wsn::cli
