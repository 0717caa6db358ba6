#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace fpuwave {

enum class Outcome { ok, numerical_failure };

struct CommandResult {
    Outcome outcome = Outcome::ok;
    /// Summary written next to the outputs (embeds the resolved config).
    nlohmann::json report;
    /// Human-readable lines for the terminal.
    std::vector<std::string> lines;
};

/// Each command normalises the config first. Configuration problems raise
/// ConfigError, unwritable outputs IoError; numerical trouble is reported
/// through Outcome::numerical_failure.
CommandResult cmd_solve(RunConfig cfg);
CommandResult cmd_sweep(RunConfig cfg);
CommandResult cmd_verify(RunConfig cfg);
CommandResult cmd_figures_data(RunConfig cfg);

/// Deltas used by figures-data when none are configured.
std::vector<double> figure_deltas();

} // namespace fpuwave
