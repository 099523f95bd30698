#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pccdr::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;      // bad flags, unknown method, wrong output kind
inline constexpr int kExitData = 3;       // unreadable / malformed / mismatched data
inline constexpr int kExitNumerical = 4;  // non-finite loss during optimization

/// Runs one command. `args` excludes the program name. Data goes to `out` when
/// no --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pccdr::cli
