#pragma once

#include <iosfwd>

#include "matmi/config.hpp"

namespace matmi {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitConfig = 2,
    kExitSolver = 3,
    kExitIo = 4,
};

/// Each command validates the config, computes everything in memory and
/// only then writes its files (atomically, one by one) into output_dir.
void cmd_phantom(const RunConfig& config, std::ostream& log);
void cmd_forward(const RunConfig& config, std::ostream& log);
void cmd_invert(const RunConfig& config, std::ostream& log);
void cmd_study(const RunConfig& config, std::ostream& log);

/// Dispatches on config.command and maps exceptions to exit codes, printing
/// the diagnostic to err.
int run_command(const RunConfig& config, std::ostream& log, std::ostream& err);

/// Maps the exception currently being handled to an exit code.
int exit_code_for_current_exception(std::ostream& err);

} // namespace matmi
