#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace densitylab {

/// Exit codes: 0 report computed (Inconclusive verdicts included), 2 input
/// error, 3 enumeration budget or predicate cap exceeded.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitBudget = 3;

/// Runs one densitylab command. `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace densitylab
