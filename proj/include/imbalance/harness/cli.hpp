#pragma once

#include <ostream>

namespace imbalance::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point of imbalance-bench. Returns the process exit code:
/// 0 on success, 1 on usage or configuration errors, 2 on runtime errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace imbalance::harness
