#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "colloid/diagnostics.hpp"
#include "colloid/dynamics.hpp"
#include "colloid/geometry.hpp"
#include "colloid/gibbs.hpp"

namespace colloid {

enum class RunMode { simulate, sample, analyze, verify_bounds, equivalence };

std::string to_string(RunMode mode);
std::optional<RunMode> run_mode_from(const std::string& text);

enum class InitialKind { empty, random, file };

struct InitialCondition {
    InitialKind kind = InitialKind::empty;
    std::string file;             // kind == file
    std::int64_t spheres = 0;     // kind == random
    std::int64_t particles = 0;
    std::int64_t placement_attempts = 10000;  // per point, sequential insertion
};

struct RunConfig {
    RunMode mode = RunMode::simulate;
    SimulationDomain domain;
    GibbsModel model = GibbsModel::two_type_hard_core;
    double z_sphere = 1.0;
    double z_particle = 0.0;
    double penalisation_radius = 0.0;  // > 0 selects the soft-wall field
    std::string exterior_file;

    IntegratorSettings integrator;
    double horizon = 1.0;
    std::int64_t sample_every = 100;

    McmcSettings mcmc;
    std::int64_t burn_in = 10000;
    std::int64_t thin = 100;
    std::int64_t count = 1000;

    BadPathSchedule schedule;
    double schedule_radius = 0.0;  // > 0 derives delta/kappa/alpha from R
    std::int64_t replicas = 10000;

    InitialCondition initial;

    std::optional<std::uint64_t> seed;  // mandatory; no wall-clock default
    std::string out_dir = ".";
};

struct ConfigError {
    std::string location;  // "section.key" or "line N"
    std::string message;
};

struct ParseResult {
    std::optional<RunConfig> config;
    std::vector<ConfigError> errors;  // exhaustive, not first-failure
    bool ok() const { return errors.empty() && config.has_value(); }
};

// Strict INI-style parser: `[section]` heads, `key = value` lines, `#`
// comments. Unknown sections or keys are errors; every error is collected.
ParseResult parse_config(const std::string& text);
ParseResult parse_config_file(const std::string& path);

// Canonical rendering: fixed section and key order, %.17g numbers, so that
// parse(render(config)) reproduces the config exactly and the hash is stable.
std::string render_config(const RunConfig& config);

// FNV-1a (64-bit) over the canonical rendering, as 16 lowercase hex digits.
std::string config_hash(const RunConfig& config);
std::uint64_t fnv1a64(const std::string& text);

// Semantic validation beyond parsing; returns every violation found.
std::vector<ConfigError> validate(const RunConfig& config);

}  // namespace colloid
