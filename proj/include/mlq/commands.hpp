#pragma once

#include <ostream>
#include <string>

#include "mlq/config.hpp"

namespace mlq {

enum ExitCode { kExitOk = 0, kExitChecksFailed = 1, kExitUsage = 2, kExitNumerical = 3 };

struct CommandContext {
  std::string out_dir;  // overrides the config's output_dir when nonempty
  int jobs = 0;         // 0: use the config value
  std::ostream* log = nullptr;
};

int cmd_generate(const RunConfig& cfg, const CommandContext& ctx);
int cmd_verify(const RunConfig& cfg, const CommandContext& ctx);
int cmd_closing(const RunConfig& cfg, const CommandContext& ctx);
int cmd_family(const RunConfig& cfg, const CommandContext& ctx);

// Maps a command name to its function and turns errors into exit codes.
int run_command(const std::string& name, const std::string& config_path, const CommandContext& ctx,
                std::ostream& err);

}  // namespace mlq
