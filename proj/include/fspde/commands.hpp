#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "fspde/config.hpp"

namespace fspde {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitCheckFailed = 2, kExitNumerical = 3 };

struct CommandOptions {
    std::optional<std::filesystem::path> out;  // overrides config.output
    std::optional<std::uint64_t> seed;         // overrides config.seed
    std::size_t refine = 3;                    // refinement levels for compare / factorization
    std::string which = "kernel";              // verify target
};

/// Relative thresholds used by the pass/fail summaries.
inline constexpr double kCompareThreshold = 5e-2;
inline constexpr double kFactorizationThreshold = 5e-2;
inline constexpr double kHolderPassRate = 0.9;

int cmd_simulate(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);
/// which: kernel | bound-i | lemma1 | eq44 | factorization
int cmd_verify(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);
int cmd_holder(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);
int cmd_compare(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);

/// Loads the config (or uses defaults when `config_path` is empty), runs `command`, and maps
/// exceptions to exit codes: configuration 1, numerical failure 3.
int run_command(const std::string& command, const std::filesystem::path& config_path, const CommandOptions& options,
                std::ostream& log, std::ostream& err);

}  // namespace fspde
