#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "colloid/depletion.hpp"
#include "colloid/dynamics.hpp"
#include "colloid/geometry.hpp"
#include "colloid/gibbs.hpp"
#include "colloid/rng.hpp"

using namespace colloid;

namespace {

SimulationDomain box_domain(int d, double side) {
    SimulationDomain dom;
    dom.d = d;
    dom.r_sphere = 0.5;
    dom.r_particle = 0.075;
    dom.container = ContainerKind::periodic_box;
    dom.box_sides.assign(static_cast<std::size_t>(d), side);
    return dom;
}

// Spheres on a jittered grid with cores separated, plus interstitial particles.
TwoTypeConfiguration seeded_config(const SimulationDomain& dom, std::size_t spheres,
                                   std::size_t particles, Rng& rng) {
    TwoTypeConfiguration config;
    config.d = dom.d;
    auto admissible_add = [&](bool sphere) {
        for (int attempt = 0; attempt < 20000; ++attempt) {
            std::vector<double> x(static_cast<std::size_t>(dom.d));
            for (std::size_t c = 0; c < x.size(); ++c)
                x[c] = rng.uniform(0.0, dom.box_sides[c]);
            if (sphere) config.add_sphere(ConstSpan(x), config.next_sphere_id());
            else config.add_particle(ConstSpan(x), config.next_particle_id());
            if (is_admissible(config, dom, 0.0)) return;
            if (sphere) config.remove_sphere(config.sphere_count() - 1);
            else config.remove_particle(config.particle_count() - 1);
        }
    };
    for (std::size_t i = 0; i < spheres; ++i) admissible_add(true);
    for (std::size_t k = 0; k < particles; ++k) admissible_add(false);
    return config;
}

void bm_neighbor_grid(benchmark::State& state) {
    auto n = static_cast<std::size_t>(state.range(0));
    auto dom = box_domain(2, 24.0);
    Rng rng(1);
    auto config = seeded_config(dom, n, 0, rng);
    NeighborGrid grid(dom, 2.0 * dom.r_sphere + 0.1, config.sphere_x, 2);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (auto _ : state) {
        grid.pairs(pairs);
        benchmark::DoNotOptimize(pairs.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void bm_energy(benchmark::State& state) {
    auto n = static_cast<std::size_t>(state.range(0));
    auto dom = box_domain(2, 24.0);
    DepletionParams p{2, 0.5, 0.075, 1.0};
    Rng rng(2);
    auto config = seeded_config(dom, n, 0, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(energy(config.sphere_x, dom, p));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void bm_grad_energy(benchmark::State& state) {
    auto n = static_cast<std::size_t>(state.range(0));
    auto dom = box_domain(2, 24.0);
    DepletionParams p{2, 0.5, 0.075, 1.0};
    Rng rng(3);
    auto config = seeded_config(dom, n, 0, rng);
    for (auto _ : state) {
        auto g = grad_energy(config.sphere_x, dom, p);
        benchmark::DoNotOptimize(g.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void bm_step_two_type(benchmark::State& state) {
    auto n = static_cast<std::size_t>(state.range(0));
    auto dom = box_domain(2, 24.0);
    Rng rng(4);
    auto config = seeded_config(dom, n, n, rng);
    auto settings = IntegratorSettings::defaults_for(dom);
    DynamicsSpec spec;
    spec.model = DynamicsModel::hard_core;
    LocalTimeLedger ledger;
    for (auto _ : state) {
        step_two_type(config, dom, spec, settings, rng, ledger);
    }
    state.SetItemsProcessed(state.iterations() * 2 * static_cast<std::int64_t>(n));
}

void bm_mcmc_step(benchmark::State& state) {
    GibbsModelParams params;
    params.model = GibbsModel::two_type_hard_core;
    params.domain = box_domain(2, 12.0);
    params.z_sphere = 0.6;
    params.z_particle = 1.0;
    McmcSettings settings;
    Rng rng(5);
    SamplerState sampler;
    sampler.config.d = 2;
    for (int warm = 0; warm < 20000; ++warm) mcmc_step(sampler, params, settings, rng);
    for (auto _ : state) {
        mcmc_step(sampler, params, settings, rng);
    }
    state.SetItemsProcessed(state.iterations());
}

BENCHMARK(bm_neighbor_grid)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(bm_energy)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(bm_grad_energy)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(bm_step_two_type)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(bm_mcmc_step);

}  // namespace

BENCHMARK_MAIN();
