#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "shockzoom/config.hpp"
#include "shockzoom/error.hpp"

namespace shockzoom {

enum ExitStatus : int {
  kExitOk = 0,
  kExitAssertion = 1,
  kExitConfig = 2,
  kExitInstability = 3,
};

/// Exit status for a library failure: Instability maps to 3, numerical
/// breakdowns (no crossing, no convergence, missing roots) to 1, and
/// everything caused by the inputs to 2.
int exit_status(ErrorKind kind);

/// run, sweep, audit, z-table, profile, merge, zlimit.
const std::vector<std::string>& command_names();

/// Audit suites understood by the audit command.
const std::vector<std::string>& audit_suites();

/// Executes a subcommand with the effective configuration. CSV files and
/// summary.json go to output.dir; progress lines go to `log`. Returns 0 when
/// every assertion holds and 1 otherwise; library failures propagate.
int execute(const std::string& command, const Config& config, std::ostream& log);

/// %.17g.
std::string format_number(double v);

}  // namespace shockzoom
