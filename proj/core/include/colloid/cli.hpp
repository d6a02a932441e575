#pragma once

#include <cstdint>
#include <string>

#include "colloid/config.hpp"

namespace colloid {

// Process exit codes shared by every subcommand.
inline constexpr int exit_success = 0;
inline constexpr int exit_validation_error = 1;
inline constexpr int exit_runtime_error = 2;
inline constexpr int exit_verification_failed = 3;

struct CliOptions {
    std::string config_path;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string out_dir = ".";
    bool strict = false;
};

// Runs one subcommand with an already-parsed config. Writes artifacts under
// options.out_dir; artifact headers carry the config hash and the seed.
// Returns one of the exit codes above.
int execute(const RunConfig& config, const CliOptions& options);

}  // namespace colloid
