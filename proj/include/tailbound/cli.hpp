#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tailbound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation. `args` excludes the program name. Tables go to
/// `out`, diagnostics to `err`; `in` backs `--input -` and `--prices -`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in);

}  // namespace tailbound::cli
