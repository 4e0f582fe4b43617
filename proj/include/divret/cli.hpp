#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace divret {

/// Exit codes of run_command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

/**
 * @brief Runs one CLI invocation.
 *
 * `args` excludes the program name. Reports go to `out`; usage and error
 * messages go to `err`. Subcommands: stats, decompose, simulate,
 * buyhold-closed-form, montecarlo.
 */
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace divret
