#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qhm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. `args` excludes the program name. Results go to `out`
/// (or to --out), diagnostics to `err`; `in` backs a missing or "-" input.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace qhm::cli
