#pragma once

#include <filesystem>
#include <string>

#include "raman/config.hpp"

namespace raman {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_numerical = 2 };

// Runs one subcommand and writes its artifacts under cfg.output.directory.
// Errors are reported on stderr and mapped to an exit code.
int run_subcommand(const std::string& name, const RunConfig& cfg, unsigned jobs = 0);

// Loads the file, applies --out, checks required keys and runs.
int run_from_file(const std::string& name, const std::filesystem::path& config_path, unsigned jobs,
                  const std::string& out_dir = {});

}  // namespace raman
