#pragma once

#include <ostream>

#include "run_config.hpp"

namespace latentsplit::cli {

/// Runs cfg.command, writing the table to `out` and progress notes to `log`.
/// Returns kClean or kAmbiguous; library errors other than numeric ambiguity propagate.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& log);

int cmd_rgb4_scan(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_rgb4_noise(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_fritz_scan(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_do_demo(const RunConfig& cfg, std::ostream& out, std::ostream& log);

}  // namespace latentsplit::cli
