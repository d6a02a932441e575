#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "colloid/depletion.hpp"
#include "colloid/geometry.hpp"
#include "colloid/penalisation.hpp"
#include "colloid/rng.hpp"

namespace colloid {

enum class GibbsModel {
    two_type_hard_core,   // both types mobile, indicator weight only
    one_type_depletion,   // spheres only, weight exp(-z_particle E)
    penalised             // both types mobile, weight exp(-sum psi), soft walls
};

struct GibbsModelParams {
    GibbsModel model = GibbsModel::two_type_hard_core;
    SimulationDomain domain;
    double z_sphere = 1.0;
    double z_particle = 0.0;
    // penalised model only
    std::optional<PenalisationField> field;

    DepletionParams depletion_params() const;
    void validate() const;
};

struct SamplerState {
    TwoTypeConfiguration config;
    double energy = 0.0;              // cached depletion energy (one-type model)
    std::int64_t accepted_birth = 0;
    std::int64_t accepted_death = 0;
    std::int64_t accepted_translate = 0;
    std::int64_t proposals = 0;
    std::int64_t energy_rebuilds = 0;
};

struct McmcSettings {
    double p_birth = 0.4;
    double p_death = 0.4;           // remainder is translate
    double translate_scale = 0.3;   // kick std in units of r_sphere
    std::int64_t full_recompute_every = 10000;  // cached-energy refresh period
    double energy_drift_tolerance = 1e-8;
};

// One birth/death/translate proposal with Metropolis acceptance for the
// grand-canonical measure of `params`. Returns true if accepted.
bool mcmc_step(SamplerState& state, const GibbsModelParams& params,
               const McmcSettings& settings, Rng& rng);

// Burn in, then record `count` configurations thinned by `thin` proposals.
std::vector<TwoTypeConfiguration> sample(const GibbsModelParams& params,
                                         const McmcSettings& settings,
                                         std::int64_t burn_in, std::int64_t thin,
                                         std::int64_t count, Rng& rng);

struct TinyPartitionResult {
    double partition = 0.0;          // truncated grand partition sum
    double std_error = 0.0;
    // occupancy[n][m]: probability weight of n spheres and m particles
    std::vector<std::vector<double>> occupancy;
    double truncation_remainder_bound = 0.0;
};

// Quasi Monte Carlo evaluation of the grand partition function of a small
// window, truncated at max_spheres and max_particles of each type (both <= 2).
TinyPartitionResult exact_tiny_partition(const GibbsModelParams& params,
                                         int max_spheres, int max_particles,
                                         std::int64_t quad_samples);

struct MarginalEquivalenceResult {
    // summary statistics of the sphere marginal under each sampler
    double two_type_mean_count = 0.0;
    double two_type_count_se = 0.0;
    double one_type_mean_count = 0.0;
    double one_type_count_se = 0.0;
    double two_type_mean_pair = 0.0;   // mean close-pair count, cutoff 2 (r_sphere + r_particle)
    double two_type_pair_se = 0.0;
    double one_type_mean_pair = 0.0;
    double one_type_pair_se = 0.0;
    double count_z = 0.0;
    double pair_z = 0.0;
    // particle reconstruction check
    double reconstructed_particle_mean = 0.0;
    double reconstructed_particle_se = 0.0;
    double direct_particle_mean = 0.0;
    double direct_particle_se = 0.0;
    double particle_z = 0.0;
};

// Samples the two-type measure and the sphere-only depletion measure at the
// same activities and compares the sphere marginals, then reconstructs the
// small type over the one-type samples and compares its mean count with the
// directly sampled one.
MarginalEquivalenceResult marginal_equivalence_experiment(
    const GibbsModelParams& params, const McmcSettings& settings,
    std::int64_t burn_in, std::int64_t thin, std::int64_t count, Rng& rng);

// Poisson small type of activity z_particle thinned off the forbidden region
// of the given spheres; used by the reconstruction above and by tests.
TwoTypeConfiguration reconstruct_particles(const std::vector<double>& sphere_centres,
                                           const SimulationDomain& dom,
                                           double z_particle, Rng& rng);

}  // namespace colloid
