#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "colloid/config.hpp"
#include "doctest.h"

using namespace colloid;

namespace {

bool has_error(const std::vector<ConfigError>& errors, const std::string& location) {
    return std::any_of(errors.begin(), errors.end(), [&](const ConfigError& e) {
        return e.location == location;
    });
}

RunConfig valid_baseline() {
    RunConfig c;
    c.mode = RunMode::sample;
    c.domain.d = 2;
    c.domain.r_sphere = 0.5;
    c.domain.r_particle = 0.075;
    c.domain.container = ContainerKind::ball;
    c.domain.ball_radius = 3.0;
    c.seed = 12345;
    return c;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("run modes round trip through their names") {
    for (RunMode mode : {RunMode::simulate, RunMode::sample, RunMode::analyze,
                         RunMode::verify_bounds, RunMode::equivalence}) {
        auto back = run_mode_from(to_string(mode));
        REQUIRE(back.has_value());
        CHECK(*back == mode);
    }
    CHECK(run_mode_from("verify_bounds") == RunMode::verify_bounds);
    CHECK(run_mode_from("verify-bounds") == RunMode::verify_bounds);
    CHECK_FALSE(run_mode_from("meditate").has_value());
}

TEST_CASE("a minimal file leaves the documented defaults in place") {
    auto result = parse_config(
        "[run]\n"
        "mode = simulate\n"
        "seed = 7\n");
    REQUIRE(result.ok());
    const auto& c = *result.config;
    CHECK(c.mode == RunMode::simulate);
    CHECK(c.seed == 7);
    CHECK(c.out_dir == ".");
    CHECK(c.domain.d == 3);
    CHECK(c.domain.r_sphere == 1.0);
    CHECK(c.domain.r_particle == 0.1);
    CHECK(c.model == GibbsModel::two_type_hard_core);
    CHECK(c.z_sphere == 1.0);
    CHECK(c.z_particle == 0.0);
    CHECK(c.mcmc.p_birth == 0.4);
    CHECK(c.mcmc.p_death == 0.4);
    CHECK(c.mcmc.translate_scale == 0.3);
    CHECK(c.burn_in == 10000);
    CHECK(c.thin == 100);
    CHECK(c.count == 1000);
    CHECK(c.sample_every == 100);
    CHECK(c.horizon == 1.0);
    CHECK(c.replicas == 10000);
    CHECK(c.initial.kind == InitialKind::empty);
    CHECK(c.initial.placement_attempts == 10000);
}

TEST_CASE("every section and key lands in the right field") {
    auto result = parse_config(
        "# full sweep\n"
        "[run]\n"
        "mode = verify-bounds\n"
        "seed = 18446744073709551615\n"
        "out_dir = artifacts/run1\n"
        "\n"
        "[domain]\n"
        "d = 2\n"
        "r_sphere = 0.5\n"
        "r_particle = 0.075\n"
        "sigma = 2.5\n"
        "container = periodic_box\n"
        "box_sides = 6 6\n"
        "exterior_file = walls.txt\n"
        "\n"
        "[model]\n"
        "kind = one_type_depletion\n"
        "z_sphere = 0.9\n"
        "z_particle = 1.25\n"
        "\n"
        "[integrator]\n"
        "time_step = 1e-5\n"
        "max_projection_sweeps = 64\n"
        "projection_tolerance = 1e-11\n"
        "admissibility_slack = 1e-13\n"
        "zero_noise = true\n"
        "horizon = 0.25\n"
        "sample_every = 50\n"
        "\n"
        "[mcmc]\n"
        "p_birth = 0.35\n"
        "p_death = 0.35\n"
        "translate_scale = 0.2\n"
        "full_recompute_every = 500\n"
        "energy_drift_tolerance = 1e-7\n"
        "burn_in = 2000\n"
        "thin = 10\n"
        "count = 400\n"
        "\n"
        "[schedule]\n"
        "alpha = 4.5\n"
        "delta = 0.2\n"
        "kappa = 2\n"
        "eps = 0.1\n"
        "rho = 0.5\n"
        "radius = 27\n"
        "replicas = 5000\n"
        "\n"
        "[initial]\n"
        "kind = random\n"
        "spheres = 12\n"
        "particles = 3\n"
        "placement_attempts = 500\n");
    REQUIRE(result.ok());
    const auto& c = *result.config;
    CHECK(c.mode == RunMode::verify_bounds);
    CHECK(c.seed == 18446744073709551615ull);
    CHECK(c.out_dir == "artifacts/run1");
    CHECK(c.domain.d == 2);
    CHECK(c.domain.sigma == 2.5);
    CHECK(c.domain.container == ContainerKind::periodic_box);
    CHECK(c.domain.box_sides == std::vector<double>{6.0, 6.0});
    CHECK(c.exterior_file == "walls.txt");
    CHECK(c.model == GibbsModel::one_type_depletion);
    CHECK(c.z_sphere == 0.9);
    CHECK(c.z_particle == 1.25);
    CHECK(c.integrator.time_step == 1e-5);
    CHECK(c.integrator.max_projection_sweeps == 64);
    CHECK(c.integrator.projection_tolerance == 1e-11);
    CHECK(c.integrator.admissibility_slack == 1e-13);
    CHECK(c.integrator.zero_noise);
    CHECK(c.horizon == 0.25);
    CHECK(c.sample_every == 50);
    CHECK(c.mcmc.p_birth == 0.35);
    CHECK(c.mcmc.full_recompute_every == 500);
    CHECK(c.mcmc.energy_drift_tolerance == 1e-7);
    CHECK(c.burn_in == 2000);
    CHECK(c.thin == 10);
    CHECK(c.count == 400);
    CHECK(c.schedule.alpha == 4.5);
    CHECK(c.schedule.delta == 0.2);
    CHECK(c.schedule.kappa == 2);
    CHECK(c.schedule.eps == 0.1);
    CHECK(c.schedule.rho == 0.5);
    CHECK(c.schedule_radius == 27.0);
    CHECK(c.replicas == 5000);
    CHECK(c.initial.kind == InitialKind::random);
    CHECK(c.initial.spheres == 12);
    CHECK(c.initial.particles == 3);
    CHECK(c.initial.placement_attempts == 500);
}

TEST_CASE("rendering is a fixed point of parsing") {
    auto first = parse_config(
        "[run]\n"
        "mode = sample\n"
        "seed = 99\n"
        "[domain]\n"
        "d = 2\n"
        "r_sphere = 0.5\n"
        "r_particle = 0.0749999999999999\n"
        "container = ball\n"
        "ball_radius = 2.125\n"
        "[model]\n"
        "z_sphere = 0.30000000000000004\n");
    REQUIRE(first.ok());
    std::string rendered = render_config(*first.config);
    auto second = parse_config(rendered);
    REQUIRE(second.ok());
    CHECK(render_config(*second.config) == rendered);
    CHECK(second.config->z_sphere == first.config->z_sphere);
    CHECK(second.config->domain.ball_radius == 2.125);
}

TEST_CASE("the hash tracks semantics and ignores the output directory") {
    auto a = valid_baseline();
    std::string h = config_hash(a);
    CHECK(h.size() == 16);
    CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);

    auto b = a;
    b.out_dir = "elsewhere/deeply/nested";
    CHECK(config_hash(b) == h);

    auto c = a;
    c.z_sphere = 1.0000000000000002;
    CHECK(config_hash(c) != h);

    auto d = a;
    d.seed = 12346;
    CHECK(config_hash(d) != h);

    CHECK(fnv1a64("") == 14695981039346656037ull);
    CHECK(fnv1a64("a") == 12638187200555641996ull);
    CHECK(fnv1a64("colloid") == 10243351440667235333ull);
}

TEST_CASE("parse errors are collected exhaustively with locations") {
    auto result = parse_config(
        "stray = 1\n"
        "[kitchen]\n"
        "sink = 2\n"
        "[domain]\n"
        "d = two\n"
        "d = 2\n"
        "r_sphere =\n"
        "flavor = mint\n"
        "[schedule\n");
    CHECK_FALSE(result.ok());
    CHECK_FALSE(result.config.has_value());
    REQUIRE(result.errors.size() == 7);
    CHECK(has_error(result.errors, "line 1"));         // key outside any section
    CHECK(has_error(result.errors, "line 2"));         // unknown section
    CHECK(has_error(result.errors, "domain.d"));       // not an integer
    CHECK(has_error(result.errors, "domain.r_sphere"));  // empty value
    CHECK(has_error(result.errors, "domain.flavor"));  // unknown key
    CHECK(has_error(result.errors, "line 9"));         // unterminated section
    // the duplicate d and the skipped kitchen.sink account for the rest
    int duplicates = 0;
    for (const auto& e : result.errors)
        if (e.message == "duplicate key") ++duplicates;
    CHECK(duplicates == 1);
}

TEST_CASE("a missing config file reports its path") {
    auto result = parse_config_file("definitely/not/here.ini");
    CHECK_FALSE(result.ok());
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].location == "definitely/not/here.ini");
}

TEST_CASE("semantic validation walks every rule") {
    CHECK(validate(valid_baseline()).empty());

    auto bad = [](RunConfig c, const std::string& location) {
        auto errors = validate(c);
        CHECK_FALSE(errors.empty());
        CHECK_MESSAGE(has_error(errors, location), "expected ", location);
    };

    {
        auto c = valid_baseline();
        c.seed.reset();
        bad(c, "run.seed");
    }
    {
        auto c = valid_baseline();
        c.out_dir = "";
        bad(c, "run.out_dir");
    }
    {
        auto c = valid_baseline();
        c.domain.d = 0;
        bad(c, "domain.d");
    }
    {
        auto c = valid_baseline();
        c.domain.r_particle = 0.5;  // must stay below r_sphere
        bad(c, "domain.r_particle");
    }
    {
        auto c = valid_baseline();
        c.domain.sigma = 0.0;
        bad(c, "domain.sigma");
    }
    {
        auto c = valid_baseline();
        c.domain.ball_radius = 0.0;
        bad(c, "domain.ball_radius");
    }
    {
        auto c = valid_baseline();
        c.domain.container = ContainerKind::periodic_box;
        c.domain.box_sides = {5.0};
        bad(c, "domain.box_sides");
    }
    {
        auto c = valid_baseline();
        c.z_particle = -1.0;
        bad(c, "model.z_particle");
    }
    {
        auto c = valid_baseline();
        c.model = GibbsModel::one_type_depletion;
        c.domain.r_particle = 0.2;  // ratio 0.4 exceeds the pairwise regime
        bad(c, "model.kind");
    }
    {
        auto c = valid_baseline();
        c.model = GibbsModel::penalised;
        c.penalisation_radius = 8.0;
        bad(c, "domain.container");  // penalised runs without a container
        c.domain.container = ContainerKind::none;
        CHECK(validate(c).empty());
        c.penalisation_radius = 0.5;
        bad(c, "model.penalisation_radius");
    }
    {
        auto c = valid_baseline();
        c.penalisation_radius = 4.0;  // radius without the penalised model
        bad(c, "model.penalisation_radius");
    }
    {
        auto c = valid_baseline();
        c.integrator.max_projection_sweeps = 0;
        bad(c, "integrator.max_projection_sweeps");
    }
    {
        auto c = valid_baseline();
        c.sample_every = 0;
        bad(c, "integrator.sample_every");
    }
    {
        auto c = valid_baseline();
        c.mcmc.p_birth = 0.7;
        c.mcmc.p_death = 0.7;
        bad(c, "mcmc.p_birth");
    }
    {
        auto c = valid_baseline();
        c.thin = 0;
        bad(c, "mcmc.thin");
    }
    {
        auto c = valid_baseline();
        c.count = 0;
        bad(c, "mcmc.count");
    }
    {
        auto c = valid_baseline();
        c.schedule_radius = 5.0;  // derived schedules need radius >= 8
        bad(c, "schedule.radius");
    }
    {
        auto c = valid_baseline();
        c.mode = RunMode::verify_bounds;
        c.schedule.kappa = 0;
        c.schedule.delta = 0.0;
        bad(c, "schedule.kappa");
        bad(c, "schedule.delta");
    }
    {
        auto c = valid_baseline();
        c.replicas = 0;
        bad(c, "schedule.replicas");
    }
    {
        auto c = valid_baseline();
        c.initial.kind = InitialKind::file;
        bad(c, "initial.file");
    }
    {
        auto c = valid_baseline();
        c.initial.kind = InitialKind::random;
        c.initial.placement_attempts = 0;
        bad(c, "initial.placement_attempts");
    }
    {
        auto c = valid_baseline();
        c.mode = RunMode::simulate;
        c.domain.container = ContainerKind::none;
        c.initial.kind = InitialKind::random;
        bad(c, "initial.kind");  // random placement needs a bounded container
    }
    {
        auto c = valid_baseline();
        c.mode = RunMode::analyze;
        bad(c, "initial.file");  // analyze reads the artifact named there
    }
    {
        auto c = valid_baseline();
        c.model = GibbsModel::one_type_depletion;
        c.initial.kind = InitialKind::random;
        c.initial.particles = 2;
        bad(c, "initial.particles");
    }
    {
        auto c = valid_baseline();
        c.domain.container = ContainerKind::none;
        bad(c, "domain.container");  // sampling needs a bounded container
    }
}

}  // TEST_SUITE
