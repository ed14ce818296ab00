#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "eclbm/config.hpp"

namespace eclbm {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitInstability = 3, kExitConstraint = 4 };

struct CommandOptions {
    std::string config_path;              // echoed in the header only
    std::optional<std::string> out_path;  // used to place disc snapshots
    std::optional<std::string> snapshot_format;
};

// Each writes a '#' header echoing the resolved config, then CSV. Errors go to
// err; the return value is the process exit code.
int cmd_constraints(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_zero_point(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_relax_wave(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_disc(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err, const CommandOptions& opt = {});

// Load the config, dispatch, and map exceptions to exit codes. Writes to
// opt.out_path when given, otherwise to out.
int run_command(const std::string& command, const CommandOptions& opt, std::ostream& out, std::ostream& err);

// Same, with the config already in memory.
int run_command_text(const std::string& command, const std::string& config_text, const CommandOptions& opt,
                     std::ostream& out, std::ostream& err);

}  // namespace eclbm
