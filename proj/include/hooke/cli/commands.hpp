#pragma once

#include "hooke/cli/config.hpp"

namespace hooke::cli {

enum ExitCode { exit_ok = 0, exit_failure = 1, exit_config = 2, exit_numerical = 3 };

// Each command writes its data files and one manifest into c.out.
void cmd_tabulate(const RunConfig& c);
void cmd_figure(const RunConfig& c);
void cmd_peo_sum(const RunConfig& c);
void cmd_aniso(const RunConfig& c);
void cmd_kernel(const RunConfig& c);
void cmd_exchange(const RunConfig& c);

/// Validates and dispatches on c.command.
void run_command(const RunConfig& c);

/// Full command line front end; returns the process exit code.
int main_entry(int argc, char** argv);

}  // namespace hooke::cli
