#pragma once

#include "mwcli/config.hpp"

#include <ostream>
#include <string>

namespace mwcli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

struct CommandContext {
  Config config;
  std::string out_dir = ".";
  std::ostream* log = nullptr;  // human readable progress, may be null
};

/// Each command writes its CSV files under out_dir and returns an exit code.
/// Invariant failures print one `FAIL ...` line to the log; config and I/O
/// problems throw ConfigError.
int cmd_gen(const CommandContext& ctx);
int cmd_ap(const CommandContext& ctx);
int cmd_maximal(const CommandContext& ctx);
int cmd_sparse(const CommandContext& ctx);
int cmd_extrapolate(const CommandContext& ctx);
int cmd_verify(const CommandContext& ctx);

}  // namespace mwcli
