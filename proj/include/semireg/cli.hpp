#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace semireg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitInapplicable = 4;

inline constexpr unsigned long long kDefaultSeed = 20240601;

/// Runs one subcommand. `args` excludes the program name. Results go to
/// `out` (or the --out file), diagnostics and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace semireg::cli
