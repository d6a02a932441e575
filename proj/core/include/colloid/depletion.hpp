#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include "colloid/geometry.hpp"

namespace colloid {

struct DepletionParams {
    int d = 3;
    double r_sphere = 1.0;
    double r_particle = 0.1;
    double activity = 1.0;  // small-type activity multiplying the energy in exp(-z E)

    double r_sum() const { return r_sphere + r_particle; }
    // Above this ratio three enlarged balls can share a point and the
    // pairwise inclusion-exclusion formulas stop being exact.
    static double pairwise_regime_limit() { return 2.0 / std::numbers::sqrt3_v<double> - 1.0; }
    bool pairwise_regime() const { return r_particle / r_sphere <= pairwise_regime_limit() + 1e-15; }
    void validate() const;
};

// Overlap volume of two balls of radius r_sum whose centres are 2 u r_sum
// apart, as a function of the half-separation ratio u = dist / (2 r_sum):
//   v(u) = 2 V_{d-1} r_sum^d  \int_0^{arccos u} sin^d t dt   for u in [r_sphere/r_sum, 1],
//   v(u) = 0 for u >= 1.
// Below r_sphere/r_sum the sphere cores would overlap; that is an error.
double v_ovlap(double u, const DepletionParams& p);
double v_ovlap_prime(double u, const DepletionParams& p);

// Convenience: overlap volume at centre separation `dist` (calls v_ovlap).
double pair_overlap_volume(double dist, const DepletionParams& p);

// Volume of the union of enlarged balls around the sphere centres via
// inclusion-exclusion truncated at pairs; exact in the pairwise regime.
//   E(x) = n V_d r_sum^d - sum_{i<j} v(dist_ij / (2 r_sum)).
// Distances honour dom's periodicity.
double energy(const std::vector<double>& sphere_centres, const SimulationDomain& dom,
              const DepletionParams& p);

// Interaction energy between the `inside` centres and the union of both
// groups: E(in + out) - E(out). Pairwise exact in the pairwise regime.
double conditional_energy(const std::vector<double>& inside,
                          const std::vector<double>& outside,
                          const SimulationDomain& dom, const DepletionParams& p);

// Gradient of `energy` with respect to every inside coordinate:
//   grad_i E = sum_{j != i} V_{d-1} r_sum^{d-1}
//              (1 - dist_ij^2/(4 r_sum^2))_+^{(d-1)/2} (x_i - x_j)/dist_ij.
std::vector<double> grad_energy(const std::vector<double>& sphere_centres,
                                const SimulationDomain& dom, const DepletionParams& p);

// Activity scale below which the depletion-weighted sphere system stays in the
// low-density summable regime: 1 / (2^d (r_sum^d - r_sphere^d) V_d).
double critical_activity(const DepletionParams& p);

}  // namespace colloid
