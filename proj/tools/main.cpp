#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "colloid/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"two-type colloid simulation and sampling toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int workers = 1;
    bool strict = false;

    auto* config_opt =
        app.add_option("--config", config_path, "run configuration file");
    config_opt->required();
    auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
    app.add_option("--workers", workers, "worker count for splittable stages")
        ->check(CLI::PositiveNumber);
    auto* out_opt = app.add_option("--out", out_dir, "override the output directory");
    app.add_flag("--strict", strict, "exit nonzero when diagnostics fail");

    auto add_sub = [&](const std::string& name, const std::string& desc) {
        auto* sub = app.add_subcommand(name, desc);
        sub->fallthrough();
        return sub;
    };
    auto* sim = add_sub("simulate", "integrate the reflected dynamics");
    auto* smp = add_sub("sample", "draw grand-canonical configurations");
    auto* ana = add_sub("analyze", "diagnose a snapshot or trajectory artifact");
    auto* ver = add_sub("verify-bounds",
                        "estimate rare-event frequencies against analytic bounds");
    add_sub("equivalence", "compare two-type and one-type sphere marginals");

    CLI11_PARSE(app, argc, argv);

    auto parsed = colloid::parse_config_file(config_path);
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors)
            std::cerr << "config error at " << e.location << ": " << e.message << '\n';
        return colloid::exit_validation_error;
    }
    colloid::RunConfig cfg = *parsed.config;

    if (sim->parsed()) cfg.mode = colloid::RunMode::simulate;
    else if (smp->parsed()) cfg.mode = colloid::RunMode::sample;
    else if (ana->parsed()) cfg.mode = colloid::RunMode::analyze;
    else if (ver->parsed()) cfg.mode = colloid::RunMode::verify_bounds;
    else cfg.mode = colloid::RunMode::equivalence;

    if (seed_opt->count()) cfg.seed = seed;
    if (out_opt->count()) cfg.out_dir = out_dir;

    auto errors = colloid::validate(cfg);
    if (!errors.empty()) {
        for (const auto& e : errors)
            std::cerr << "config error at " << e.location << ": " << e.message << '\n';
        return colloid::exit_validation_error;
    }

    colloid::CliOptions options;
    options.config_path = config_path;
    options.seed = *cfg.seed;
    options.workers = workers;
    options.out_dir = cfg.out_dir;
    options.strict = strict;
    return colloid::execute(cfg, options);
}
