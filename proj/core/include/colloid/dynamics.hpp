#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "colloid/depletion.hpp"
#include "colloid/geometry.hpp"
#include "colloid/penalisation.hpp"
#include "colloid/rng.hpp"

namespace colloid {

struct IntegratorSettings {
    double time_step = 0.0;          // default 1e-4 * r_sphere^2 via defaults_for
    int max_projection_sweeps = 100;
    double projection_tolerance = 0.0;  // default 1e-10 * r_sphere
    double admissibility_slack = 0.0;   // default 1e-12 * r_sphere
    bool zero_noise = false;            // drift-only test mode

    static IntegratorSettings defaults_for(const SimulationDomain& dom);
    void validate() const;
};

// Accumulated contact local times per pair, keyed by (type, id) of both ends.
struct LedgerEntry {
    PairKey key;
    double value = 0.0;
};

class LocalTimeLedger {
public:
    void accumulate(const PairKey& key, double increment);
    double total(const PairKey& key) const;
    double total_all() const;
    // Entries sorted the same way neighbor_pairs orders keys.
    std::vector<LedgerEntry> entries() const;
    void clear();

private:
    std::vector<LedgerEntry> entries_;
    std::size_t find(const PairKey& key) const;
};

struct TrajectorySample {
    double time = 0.0;
    TwoTypeConfiguration config;
};

struct TrajectoryRecord {
    std::vector<TrajectorySample> samples;
    LocalTimeLedger ledger;
    std::int64_t steps_taken = 0;
    std::int64_t total_projection_sweeps = 0;
    int max_sweeps_used = 0;
};

enum class DynamicsModel { hard_core, penalised, depletion };

struct DynamicsSpec {
    DynamicsModel model = DynamicsModel::hard_core;
    // penalised model
    std::optional<PenalisationField> field;
    // depletion model: spheres drift down the gradient of the union volume
    std::optional<DepletionParams> depletion;
};

// One reflected Euler-Maruyama step for the two-type model: free move with
// drift, then pairwise Gauss-Seidel projection back to the closed constraints.
// Projection moves only the mobile points; exterior points act as obstacles.
// Returns false if the projection failed to converge within the sweep budget.
// sweeps_used, when given, receives the projection sweep count of this step.
bool step_two_type(TwoTypeConfiguration& config, const SimulationDomain& dom,
                   const DynamicsSpec& spec, const IntegratorSettings& settings,
                   Rng& rng, LocalTimeLedger& ledger, int* sweeps_used = nullptr);

// The projection stage alone, exposed for tests: runs Gauss-Seidel sweeps in
// ascending (type, id) order until every pair satisfies its closed constraint
// within tolerance. Records local-time increments into `ledger` when given.
// Returns the number of sweeps used, or -1 on failure to converge.
int resolve_overlaps(TwoTypeConfiguration& config, const SimulationDomain& dom,
                     const IntegratorSettings& settings, LocalTimeLedger* ledger);

// One step of the sphere-only depletion dynamics (small type integrated out).
bool step_depletion(std::vector<double>& sphere_centres, const SimulationDomain& dom,
                    const DepletionParams& p, const IntegratorSettings& settings,
                    Rng& rng, LocalTimeLedger& ledger,
                    const std::vector<std::int64_t>& ids);

// Integrate to the horizon, recording every sample_every-th step (and the
// initial state). Throws std::runtime_error if a step fails to project.
TrajectoryRecord run(const TwoTypeConfiguration& initial, const SimulationDomain& dom,
                     const DynamicsSpec& spec, const IntegratorSettings& settings,
                     double horizon, std::int64_t sample_every, Rng& rng);

}  // namespace colloid
