#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "colloid/dynamics.hpp"
#include "colloid/geometry.hpp"
#include "colloid/gibbs.hpp"
#include "colloid/rng.hpp"

namespace colloid {

struct ChainWitness {
    std::vector<std::size_t> sphere_indices;  // kappa + 1 distinct spheres
};

// A chain event: kappa + 1 distinct spheres forming a path whose first
// element lies within alpha of the origin and whose consecutive gaps are
// below 2 r_sphere + eps. Returns a witness path if one exists.
std::optional<ChainWitness> detect_chain(const TwoTypeConfiguration& config,
                                         const SimulationDomain& dom,
                                         double alpha, int kappa, double eps);

struct FastWitness {
    std::size_t point_index = 0;
    char point_type = 'S';
    double near_time = 0.0;       // a time where |x| <= alpha
    double burst_start = 0.0;     // s with an oscillation above eps within delta
    double burst_end = 0.0;
};

// A fast-displacement event for one trajectory of tracked points: some point
// comes within alpha of the origin at some time AND oscillates by more than
// eps within a window shorter than delta (the two conditions need not be
// simultaneous). Positions are read from the trajectory samples.
std::optional<FastWitness> detect_fast(const TrajectoryRecord& traj,
                                       double alpha, double delta, double eps);

struct BadPathSchedule {
    double alpha = 0.0;
    double delta = 1.0;
    int kappa = 2;
    double eps = 0.1;
    double rho = 0.0;  // inner radius whose influence region is traced

    // Schedule used for growing containers: delta = 1/floor(R^{1/3}),
    // kappa = floor(R^{1/3}), alpha = R - 2 r_sphere; needs R >= 8.
    static BadPathSchedule for_radius(double R, double r_sphere, double eps, double rho);
};

struct SeparationReport {
    bool applicable = true;        // preconditions held (no chain, no fast ball)
    bool separated = true;         // inner/outer margin stayed positive
    bool localised = true;         // inner points stayed inside the stated radii
    bool nested = true;            // index sets decreased along the windows
    double worst_sphere_margin = 0.0;    // min over time of dist - (2r + eps/2)
    double worst_particle_margin = 0.0;  // min over time of dist - (r_sum + eps/2)
    double max_inner_excursion = 0.0;    // max of |X| minus the allowed radius
    double rho_zero = 0.0;               // influence radius at the first window
};

// Checks the influence-region statement on one sampled trajectory: build the
// eps-connected closure of the rho-ball spheres at the end time, then verify
// the closure stayed separated from the rest and inside the stated radius on
// the whole window, assuming no chain and no fast event occurred.
SeparationReport verify_separation(const TrajectoryRecord& traj,
                                   const SimulationDomain& dom,
                                   const BadPathSchedule& schedule);

struct ClusterDecomposition {
    std::vector<std::vector<std::size_t>> clusters;  // sorted, largest first
    std::size_t largest = 0;
    std::size_t merges = 0;  // union-find merges; clusters + merges = points
};

// Connected components of the sphere centres under distance <= link_radius
// (defaults to 2 (r_sphere + r_particle) when zero), honouring periodicity.
ClusterDecomposition percolation_clusters(const std::vector<double>& sphere_centres,
                                          const SimulationDomain& dom,
                                          double link_radius = 0.0);

// Finite-window spanning surrogate: the cluster touches both faces of the box
// along the given axis (points within link_radius of each face), with the
// cluster built on non-periodic adjacency.
bool cluster_spans_axis(const std::vector<double>& sphere_centres,
                        const std::vector<std::size_t>& cluster,
                        const SimulationDomain& dom, double link_radius, int axis);

struct ChainBoundResult {
    std::int64_t replicas = 0;
    std::int64_t hits = 0;
    double frequency = 0.0;
    double upper_confidence = 0.0;  // one-sided Wilson at the given z
    double bound = 0.0;             // (z (( 2r+eps)^d - (2r)^d) V_d)^kappa
    bool satisfied = false;
};

// Frequency of the chain event under the hard-core sphere measure in a ball
// window, compared against the analytic chain bound.
ChainBoundResult verify_chain_bound(const GibbsModelParams& params,
                                    const BadPathSchedule& schedule,
                                    std::int64_t replicas, Rng& rng, double z = 3.0,
                                    std::int64_t burn_in = 2000, std::int64_t thin = 50);

double chain_bound_value(double z_sphere, int d, double r_sphere, double eps, int kappa);

struct FastBoundResult {
    std::int64_t replicas = 0;
    std::int64_t hits = 0;
    double frequency = 0.0;
    double upper_confidence = 0.0;
    double bound = 0.0;  // 4 sqrt(5) (d / delta) exp(-eps^2 / (10 d delta))
    bool satisfied = false;
    bool vacuous = false;  // bound exceeds 1, so any frequency passes
};

// Frequency of an eps oscillation within delta for a single free Brownian
// path on [0, 1], sampled on a grid of resolution delta / 100, against the
// analytic oscillation bound.
FastBoundResult verify_fast_bound(int d, double delta, double eps,
                                  std::int64_t replicas, Rng& rng,
                                  double horizon = 1.0, int grid_per_delta = 100,
                                  double z = 3.0);

double fast_bound_value(int d, double delta, double eps);

struct PackingPoint {
    double z_sphere = 0.0;
    double mean_density = 0.0;   // centre count / box volume
    double density_se = 0.0;
    double acceptance = 0.0;
};

struct PackingCurve {
    double z_particle = 0.0;
    std::vector<PackingPoint> points;
};

// Density versus activity along a ladder of sphere activities, for each given
// small-type activity, under the one-type depletion sampler in a periodic box.
std::vector<PackingCurve> packing_experiment(const std::vector<double>& z_ladder,
                                             const std::vector<double>& z_particles,
                                             const SimulationDomain& box,
                                             std::int64_t proposals_per_point,
                                             int chains, Rng& rng);

}  // namespace colloid
