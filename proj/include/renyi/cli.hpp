#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "renyi/store.hpp"

namespace renyi::cli {

enum ExitCode : int {
    kSuccess = 0,
    kViolationFound = 1, // verify mode only
    kUsage = 2,
    kFailure = 3,
};

/// Environment variable holding the default worker count.
inline constexpr const char* kWorkersEnv = "RENYI_WORKERS";

/// Runs one command line (without the program name). Results go to `out` as
/// a single JSON line; diagnostics and usage text go to `err`.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Rounds to 10 significant digits, the precision of every printed number.
double sig10(double value);

/// CSV with header step,delta,ss_residual,monogamy_residual,states_since_accept.
void emit_trace_csv(const RunArchive& archive, const std::filesystem::path& destination);

} // namespace renyi::cli
