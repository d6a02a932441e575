#include "colloid/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "colloid/depletion.hpp"
#include "colloid/diagnostics.hpp"
#include "colloid/dynamics.hpp"
#include "colloid/gibbs.hpp"
#include "colloid/io.hpp"
#include "colloid/penalisation.hpp"
#include "colloid/rng.hpp"
#include "colloid/stats.hpp"

namespace colloid {

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

IntegratorSettings resolved_integrator(const RunConfig& c, const SimulationDomain& dom) {
    IntegratorSettings s = IntegratorSettings::defaults_for(dom);
    if (c.integrator.time_step > 0.0) s.time_step = c.integrator.time_step;
    s.max_projection_sweeps = c.integrator.max_projection_sweeps;
    if (c.integrator.projection_tolerance > 0.0)
        s.projection_tolerance = c.integrator.projection_tolerance;
    if (c.integrator.admissibility_slack > 0.0)
        s.admissibility_slack = c.integrator.admissibility_slack;
    s.zero_noise = c.integrator.zero_noise;
    s.validate();
    return s;
}

SimulationDomain build_domain(const RunConfig& c) {
    SimulationDomain dom = c.domain;
    if (!c.exterior_file.empty()) {
        Snapshot snap = read_snapshot_file(c.exterior_file);
        if (snap.header.d != dom.d)
            throw std::runtime_error("exterior file dimension " +
                                     std::to_string(snap.header.d) +
                                     " does not match the domain dimension " +
                                     std::to_string(dom.d));
        dom.exterior = std::move(snap.config);
    }
    dom.validate();
    return dom;
}

std::optional<PenalisationField> build_field(const RunConfig& c,
                                             const SimulationDomain& dom) {
    if (c.model != GibbsModel::penalised) return std::nullopt;
    PenalisationField field;
    field.d = dom.d;
    field.R = c.penalisation_radius;
    field.r_sphere = dom.r_sphere;
    field.r_particle = dom.r_particle;
    field.exterior = dom.exterior;
    field.validate();
    return field;
}

GibbsModelParams build_gibbs(const RunConfig& c, const SimulationDomain& dom,
                             GibbsModel model) {
    GibbsModelParams params;
    params.model = model;
    params.domain = dom;
    params.z_sphere = c.z_sphere;
    params.z_particle = c.z_particle;
    params.field = model == GibbsModel::penalised ? build_field(c, dom) : std::nullopt;
    params.validate();
    return params;
}

BadPathSchedule resolved_schedule(const RunConfig& c) {
    if (c.schedule_radius > 0.0) {
        double rho = c.schedule.rho > 0.0 ? c.schedule.rho : c.domain.r_sphere;
        return BadPathSchedule::for_radius(c.schedule_radius, c.domain.r_sphere,
                                           c.schedule.eps, rho);
    }
    return c.schedule;
}

SnapshotHeader artifact_header(const SimulationDomain& dom, const RunConfig& c) {
    SnapshotHeader header = header_for(dom);
    header.seed = c.seed;
    header.config_hash = colloid::config_hash(c);
    return header;
}

void draw_in_ball(Rng& rng, int d, double radius, std::vector<double>& out) {
    out.assign(static_cast<std::size_t>(d), 0.0);
    double n2 = 0.0;
    for (auto& c : out) {
        c = rng.normal();
        n2 += c * c;
    }
    double n = std::sqrt(n2);
    if (n == 0.0) n = 1.0;
    double r = radius * std::pow(rng.uniform_open(), 1.0 / d);
    for (auto& c : out) c *= r / n;
}

void draw_in_box(Rng& rng, const std::vector<double>& sides, std::vector<double>& out) {
    out.resize(sides.size());
    for (std::size_t k = 0; k < sides.size(); ++k) out[k] = rng.uniform() * sides[k];
}

TwoTypeConfiguration build_initial(const RunConfig& c, const SimulationDomain& dom,
                                   Rng& rng) {
    TwoTypeConfiguration config;
    config.d = dom.d;
    if (c.initial.kind == InitialKind::empty) return config;
    if (c.initial.kind == InitialKind::file) {
        Snapshot snap = read_snapshot_file(c.initial.file);
        if (snap.header.d != dom.d)
            throw std::runtime_error("initial file dimension " +
                                     std::to_string(snap.header.d) +
                                     " does not match the domain dimension " +
                                     std::to_string(dom.d));
        return std::move(snap.config);
    }

    double ball_radius = dom.container == ContainerKind::ball ? dom.ball_radius
                                                              : c.penalisation_radius;
    auto draw = [&](std::vector<double>& out) {
        if (dom.container == ContainerKind::periodic_box)
            draw_in_box(rng, dom.box_sides, out);
        else
            draw_in_ball(rng, dom.d, ball_radius, out);
    };

    auto fits = [&](ConstSpan x, bool as_sphere) {
        double ss = 2.0 * dom.r_sphere;
        double sp = dom.r_sum();
        for (std::size_t i = 0; i < config.sphere_count(); ++i) {
            if (dom.distance(x, config.sphere(i)) < (as_sphere ? ss : sp)) return false;
        }
        if (as_sphere) {
            for (std::size_t k = 0; k < config.particle_count(); ++k) {
                if (dom.distance(x, config.particle(k)) < sp) return false;
            }
        }
        for (std::size_t i = 0; i < dom.exterior.sphere_count(); ++i) {
            if (dom.distance(x, dom.exterior.sphere(i)) < (as_sphere ? ss : sp))
                return false;
        }
        if (as_sphere) {
            for (std::size_t k = 0; k < dom.exterior.particle_count(); ++k) {
                if (dom.distance(x, dom.exterior.particle(k)) < sp) return false;
            }
        }
        return true;
    };

    std::vector<double> x;
    auto place = [&](std::int64_t count, bool as_sphere) {
        for (std::int64_t n = 0; n < count; ++n) {
            bool placed = false;
            for (std::int64_t attempt = 0;
                 attempt < c.initial.placement_attempts && !placed; ++attempt) {
                draw(x);
                if (fits(ConstSpan(x), as_sphere)) {
                    if (as_sphere) config.add_sphere(ConstSpan(x), config.next_sphere_id());
                    else config.add_particle(ConstSpan(x), config.next_particle_id());
                    placed = true;
                }
            }
            if (!placed)
                throw std::runtime_error(
                    "could not place initial point " + std::to_string(n + 1) + " after " +
                    std::to_string(c.initial.placement_attempts) + " attempts");
        }
    };
    place(c.initial.spheres, true);
    place(c.initial.particles, false);
    return config;
}

DynamicsSpec build_dynamics(const RunConfig& c, const SimulationDomain& dom) {
    DynamicsSpec spec;
    switch (c.model) {
        case GibbsModel::two_type_hard_core:
            spec.model = DynamicsModel::hard_core;
            break;
        case GibbsModel::penalised:
            spec.model = DynamicsModel::penalised;
            spec.field = build_field(c, dom);
            break;
        case GibbsModel::one_type_depletion: {
            spec.model = DynamicsModel::depletion;
            DepletionParams p;
            p.d = dom.d;
            p.r_sphere = dom.r_sphere;
            p.r_particle = dom.r_particle;
            p.activity = c.z_particle;
            p.validate();
            spec.depletion = p;
            break;
        }
    }
    return spec;
}

int run_simulate(const RunConfig& c, const CliOptions&) {
    SimulationDomain dom = build_domain(c);
    IntegratorSettings settings = resolved_integrator(c, dom);
    Rng rng(*c.seed);
    TwoTypeConfiguration initial = build_initial(c, dom, rng);
    DynamicsSpec spec = build_dynamics(c, dom);

    TrajectoryRecord traj =
        run(initial, dom, spec, settings, c.horizon, c.sample_every, rng);

    SnapshotHeader header = artifact_header(dom, c);
    write_trajectory_file(join_path(c.out_dir, "trajectory.txt"), traj, header);
    write_snapshot_file(join_path(c.out_dir, "final_snapshot.txt"),
                        traj.samples.back().config, header);
    write_ledger_file(join_path(c.out_dir, "ledger.txt"), traj.samples.back().time,
                      traj.ledger);

    Report report;
    report.set("simulate", "config_hash", *header.config_hash);
    report.set("simulate", "seed", format_int(static_cast<std::int64_t>(*c.seed)));
    report.set("simulate", "steps", traj.steps_taken);
    report.set("simulate", "samples", static_cast<std::int64_t>(traj.samples.size()));
    report.set("simulate", "total_projection_sweeps", traj.total_projection_sweeps);
    report.set("simulate", "max_sweeps_used",
               static_cast<std::int64_t>(traj.max_sweeps_used));
    report.set("simulate", "ledger_total", traj.ledger.total_all());
    write_report_file(join_path(c.out_dir, "report.txt"), report);

    std::cout << "simulate: " << traj.steps_taken << " steps, " << traj.samples.size()
              << " samples, ledger total " << format_double(traj.ledger.total_all())
              << " -> " << c.out_dir << '\n';
    return exit_success;
}

int run_sample(const RunConfig& c, const CliOptions& options) {
    SimulationDomain dom = build_domain(c);
    GibbsModelParams params = build_gibbs(c, dom, c.model);

    int workers = std::max(1, options.workers);
    std::int64_t per = (c.count + workers - 1) / workers;
    TrajectoryRecord record;
    std::int64_t produced = 0;
    for (int w = 0; w < workers && produced < c.count; ++w) {
        std::int64_t want = std::min(per, c.count - produced);
        Rng rng(replica_seed(*c.seed, static_cast<std::uint64_t>(w)));
        auto configs = sample(params, c.mcmc, c.burn_in, c.thin, want, rng);
        for (auto& config : configs) {
            record.samples.push_back(
                {static_cast<double>(produced), std::move(config)});
            ++produced;
        }
    }

    MeanAccumulator spheres, particles;
    for (const auto& s : record.samples) {
        spheres.add(static_cast<double>(s.config.sphere_count()));
        particles.add(static_cast<double>(s.config.particle_count()));
    }

    SnapshotHeader header = artifact_header(dom, c);
    write_trajectory_file(join_path(c.out_dir, "samples.txt"), record, header);

    Report report;
    report.set("sample", "config_hash", *header.config_hash);
    report.set("sample", "count", produced);
    report.set("sample", "workers", static_cast<std::int64_t>(workers));
    report.set("sample", "mean_spheres", spheres.mean);
    report.set("sample", "sphere_se", spheres.std_error());
    report.set("sample", "mean_particles", particles.mean);
    report.set("sample", "particle_se", particles.std_error());
    write_report_file(join_path(c.out_dir, "report.txt"), report);

    std::cout << "sample: " << produced << " configurations, mean spheres "
              << format_double(spheres.mean) << ", mean particles "
              << format_double(particles.mean) << " -> " << c.out_dir << '\n';
    return exit_success;
}

bool looks_like_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream tokens(line);
        std::string first;
        if (!(tokens >> first)) continue;
        if (first[0] == '#') continue;
        char* end = nullptr;
        std::strtod(first.c_str(), &end);
        return end == first.c_str() + first.size();
    }
    return false;
}

int analyze_snapshot(const RunConfig& c, const CliOptions& options) {
    SimulationDomain dom = build_domain(c);
    Snapshot snap = read_snapshot_file(c.initial.file);
    if (snap.header.d != dom.d)
        throw std::runtime_error("snapshot dimension does not match the domain");
    IntegratorSettings settings = resolved_integrator(c, dom);

    bool admissible = is_admissible(snap.config, dom, settings.admissibility_slack);
    auto clusters = percolation_clusters(snap.config.sphere_x, dom);
    std::size_t n = snap.config.sphere_count();
    double fraction = n ? static_cast<double>(clusters.largest) / n : 0.0;

    BadPathSchedule sched = resolved_schedule(c);
    bool chain_checked = sched.alpha > 0.0 && sched.kappa >= 1 && sched.eps > 0.0;
    bool chain_found =
        chain_checked &&
        detect_chain(snap.config, dom, sched.alpha, sched.kappa, sched.eps).has_value();

    Report report;
    report.set("analysis", "kind", "snapshot");
    report.set("analysis", "spheres", static_cast<std::int64_t>(n));
    report.set("analysis", "particles",
               static_cast<std::int64_t>(snap.config.particle_count()));
    report.set("analysis", "admissible", admissible ? "true" : "false");
    report.set("analysis", "cluster_count",
               static_cast<std::int64_t>(clusters.clusters.size()));
    report.set("analysis", "largest_cluster", static_cast<std::int64_t>(clusters.largest));
    report.set("analysis", "largest_fraction", fraction);
    report.set("analysis", "merges", static_cast<std::int64_t>(clusters.merges));
    if (chain_checked) report.set("analysis", "chain_found", chain_found ? "true" : "false");
    write_report_file(join_path(c.out_dir, "report.txt"), report);

    std::cout << "analyze: snapshot, " << (admissible ? "admissible" : "INADMISSIBLE")
              << ", largest cluster " << clusters.largest << "/" << n << " -> "
              << c.out_dir << '\n';
    if (options.strict && (!admissible || chain_found)) return exit_verification_failed;
    return exit_success;
}

int analyze_trajectory(const RunConfig& c, const CliOptions& options) {
    SimulationDomain dom = build_domain(c);
    SnapshotHeader header;
    TrajectoryRecord traj = read_trajectory_file(c.initial.file, &header);
    if (header.d != dom.d)
        throw std::runtime_error("trajectory dimension does not match the domain");
    if (traj.samples.empty()) throw std::runtime_error("trajectory holds no samples");
    IntegratorSettings settings = resolved_integrator(c, dom);

    std::int64_t admissible = 0;
    for (const auto& s : traj.samples) {
        if (is_admissible(s.config, dom, settings.admissibility_slack)) ++admissible;
    }
    double admissible_fraction =
        static_cast<double>(admissible) / static_cast<double>(traj.samples.size());

    BadPathSchedule sched = resolved_schedule(c);
    Report report;
    report.set("analysis", "kind", "trajectory");
    report.set("analysis", "samples", static_cast<std::int64_t>(traj.samples.size()));
    report.set("analysis", "admissible_fraction", admissible_fraction);

    bool separation_passed = true;
    bool separation_ran = false;
    if (sched.alpha > 0.0 && sched.rho > 0.0) {
        try {
            SeparationReport sep = verify_separation(traj, dom, sched);
            separation_ran = true;
            report.set("analysis", "applicable", sep.applicable ? "true" : "false");
            report.set("analysis", "rho_zero", sep.rho_zero);
            if (sep.applicable) {
                report.set("analysis", "separated", sep.separated ? "true" : "false");
                report.set("analysis", "localised", sep.localised ? "true" : "false");
                report.set("analysis", "nested", sep.nested ? "true" : "false");
                report.set("analysis", "worst_sphere_margin", sep.worst_sphere_margin);
                report.set("analysis", "worst_particle_margin", sep.worst_particle_margin);
                report.set("analysis", "max_inner_excursion", sep.max_inner_excursion);
                separation_passed = sep.separated && sep.localised && sep.nested;
            }
        } catch (const std::invalid_argument& e) {
            report.set("analysis", "separation_skipped", e.what());
        }
    }
    write_report_file(join_path(c.out_dir, "report.txt"), report);

    std::cout << "analyze: trajectory, admissible fraction "
              << format_double(admissible_fraction)
              << (separation_ran ? (separation_passed ? ", separation ok"
                                                      : ", separation FAILED")
                                 : "")
              << " -> " << c.out_dir << '\n';
    if (options.strict && (admissible_fraction < 1.0 || !separation_passed))
        return exit_verification_failed;
    return exit_success;
}

int run_analyze(const RunConfig& c, const CliOptions& options) {
    if (looks_like_trajectory(c.initial.file)) return analyze_trajectory(c, options);
    return analyze_snapshot(c, options);
}

int run_verify_bounds(const RunConfig& c, const CliOptions& options) {
    SimulationDomain dom = build_domain(c);
    BadPathSchedule sched = resolved_schedule(c);
    GibbsModelParams params = build_gibbs(c, dom, GibbsModel::two_type_hard_core);

    int workers = std::max(1, options.workers);
    std::int64_t per = (c.replicas + workers - 1) / workers;

    std::int64_t chain_hits = 0, chain_replicas = 0;
    for (int w = 0; w < workers && chain_replicas < c.replicas; ++w) {
        std::int64_t want = std::min(per, c.replicas - chain_replicas);
        Rng rng(replica_seed(*c.seed, 2 * static_cast<std::uint64_t>(w)));
        auto part = verify_chain_bound(params, sched, want, rng, 3.0, c.burn_in, c.thin);
        chain_hits += part.hits;
        chain_replicas += part.replicas;
    }
    ChainBoundResult chain;
    chain.replicas = chain_replicas;
    chain.hits = chain_hits;
    chain.frequency = static_cast<double>(chain_hits) / static_cast<double>(chain_replicas);
    Interval cw = wilson_interval(chain_hits, chain_replicas, 3.0);
    chain.upper_confidence = cw.hi;
    chain.bound =
        chain_bound_value(c.z_sphere, dom.d, dom.r_sphere, sched.eps, sched.kappa);
    chain.satisfied = cw.lo <= chain.bound;

    std::int64_t fast_hits = 0, fast_replicas = 0;
    for (int w = 0; w < workers && fast_replicas < c.replicas; ++w) {
        std::int64_t want = std::min(per, c.replicas - fast_replicas);
        Rng rng(replica_seed(*c.seed, 2 * static_cast<std::uint64_t>(w) + 1));
        auto part = verify_fast_bound(dom.d, sched.delta, sched.eps, want, rng);
        fast_hits += part.hits;
        fast_replicas += part.replicas;
    }
    FastBoundResult fast;
    fast.replicas = fast_replicas;
    fast.hits = fast_hits;
    fast.frequency = static_cast<double>(fast_hits) / static_cast<double>(fast_replicas);
    Interval fw = wilson_interval(fast_hits, fast_replicas, 3.0);
    fast.upper_confidence = fw.hi;
    fast.bound = fast_bound_value(dom.d, sched.delta, sched.eps);
    fast.vacuous = fast.bound > 1.0;
    fast.satisfied = fw.lo <= fast.bound;

    Report report;
    report.set("chain", "replicas", chain.replicas);
    report.set("chain", "hits", chain.hits);
    report.set("chain", "frequency", chain.frequency);
    report.set("chain", "upper_confidence", chain.upper_confidence);
    report.set("chain", "bound", chain.bound);
    report.set("chain", "satisfied", chain.satisfied ? "true" : "false");
    report.set("oscillation", "replicas", fast.replicas);
    report.set("oscillation", "hits", fast.hits);
    report.set("oscillation", "frequency", fast.frequency);
    report.set("oscillation", "upper_confidence", fast.upper_confidence);
    report.set("oscillation", "bound", fast.bound);
    report.set("oscillation", "vacuous", fast.vacuous ? "true" : "false");
    report.set("oscillation", "satisfied", fast.satisfied ? "true" : "false");
    auto& table = report.table("chain_bounds");
    table.columns = {"kappa", "bound"};
    for (int k = 1; k <= sched.kappa; ++k) {
        table.rows.push_back({static_cast<double>(k),
                              chain_bound_value(c.z_sphere, dom.d, dom.r_sphere,
                                                sched.eps, k)});
    }
    write_report_file(join_path(c.out_dir, "report.txt"), report);

    std::cout << "verify-bounds: chain frequency " << format_double(chain.frequency)
              << " vs bound " << format_double(chain.bound) << " (upper "
              << format_double(chain.upper_confidence) << "), oscillation frequency "
              << format_double(fast.frequency) << " vs bound "
              << format_double(fast.bound) << (fast.vacuous ? " (vacuous)" : "")
              << " -> " << c.out_dir << '\n';
    return chain.satisfied && fast.satisfied ? exit_success : exit_verification_failed;
}

int run_equivalence(const RunConfig& c, const CliOptions&) {
    SimulationDomain dom = build_domain(c);
    GibbsModelParams params = build_gibbs(c, dom, GibbsModel::two_type_hard_core);
    Rng rng(*c.seed);
    MarginalEquivalenceResult res =
        marginal_equivalence_experiment(params, c.mcmc, c.burn_in, c.thin, c.count, rng);

    Report report;
    report.set("equivalence", "two_type_mean_count", res.two_type_mean_count);
    report.set("equivalence", "two_type_count_se", res.two_type_count_se);
    report.set("equivalence", "one_type_mean_count", res.one_type_mean_count);
    report.set("equivalence", "one_type_count_se", res.one_type_count_se);
    report.set("equivalence", "count_z", res.count_z);
    report.set("equivalence", "two_type_mean_pair", res.two_type_mean_pair);
    report.set("equivalence", "two_type_pair_se", res.two_type_pair_se);
    report.set("equivalence", "one_type_mean_pair", res.one_type_mean_pair);
    report.set("equivalence", "one_type_pair_se", res.one_type_pair_se);
    report.set("equivalence", "pair_z", res.pair_z);
    report.set("equivalence", "reconstructed_particle_mean",
               res.reconstructed_particle_mean);
    report.set("equivalence", "reconstructed_particle_se", res.reconstructed_particle_se);
    report.set("equivalence", "direct_particle_mean", res.direct_particle_mean);
    report.set("equivalence", "direct_particle_se", res.direct_particle_se);
    report.set("equivalence", "particle_z", res.particle_z);
    write_report_file(join_path(c.out_dir, "report.txt"), report);

    double worst = std::max({std::fabs(res.count_z), std::fabs(res.pair_z),
                             std::fabs(res.particle_z)});
    std::cout << "equivalence: count z " << format_double(res.count_z) << ", pair z "
              << format_double(res.pair_z) << ", particle z "
              << format_double(res.particle_z) << " -> " << c.out_dir << '\n';
    return worst <= 3.0 ? exit_success : exit_verification_failed;
}

}  // namespace

int execute(const RunConfig& config, const CliOptions& options) {
    try {
        std::filesystem::create_directories(config.out_dir);
        switch (config.mode) {
            case RunMode::simulate: return run_simulate(config, options);
            case RunMode::sample: return run_sample(config, options);
            case RunMode::analyze: return run_analyze(config, options);
            case RunMode::verify_bounds: return run_verify_bounds(config, options);
            case RunMode::equivalence: return run_equivalence(config, options);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime_error;
    }
    return exit_runtime_error;
}

}  // namespace colloid
