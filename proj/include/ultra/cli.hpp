#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ultra::cli {

/// Dispatches one subcommand and writes a machine-readable JSON report.
/// Exit codes: 0 success (all verdicts pass), 2 verdict failure, 1 input
/// error, 64 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ultra::cli
