#pragma once
// Command-line front end: verbs check, eval, ball, net, seq, fixpoint and
// lambda over JSON inputs, each producing one JSON report.
//
// Exit codes: 0 all checks passed or computation completed, 1 violations
// found (the report enumerates them), 2 usage or input error with a single
// diagnostic line on the error stream.

#include <ostream>
#include <string>
#include <vector>

namespace gmetric::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitUsage = 2;

// `args` excludes the program name. The report goes to --out when given,
// otherwise to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gmetric::cli
