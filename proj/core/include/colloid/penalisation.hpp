#pragma once

#include <cstdint>
#include <vector>

#include "colloid/geometry.hpp"

namespace colloid {

// Smooth ramp pieces used by the soft confinement and soft shell bumps.
// smoothstep s rises 0 -> 1 on [0,1] with two flat derivatives at each end;
// bump = 1 - s; ramp phi integrates s, so phi' = s and phi(t) = t - 1/2 for t >= 1.
double smoothstep(double t);
double smoothstep_prime(double t);
double bump(double t);
double bump_prime(double t);
double ramp(double t);
double ramp_prime(double t);

// Soft confinement to B(0, R) plus soft shell bumps around the frozen
// exterior points lying within interaction reach of the boundary.
// Requires R >= 1 so the 2 log R offset keeps the field non-negative.
struct PenalisationField {
    int d = 3;
    double R = 8.0;
    double r_sphere = 1.0;
    double r_particle = 0.1;
    // Exterior points with R <= |y| <= R + reach, reach depending on the
    // mobile type and the exterior type.
    TwoTypeConfiguration exterior;

    double r_sum() const { return r_sphere + r_particle; }
    void validate() const;
};

enum class PointType { sphere, particle };

struct FieldValue {
    double value = 0.0;
    std::vector<double> gradient;
};

// Field seen by a mobile point of the given type at x:
//   sphere:   2 log R + phi(R^{d+1}(|x| - R))
//             + sum over exterior spheres in the shell of bump(|y - x|^2 / (2 r_sphere)^2)
//             + sum over exterior particles in the shell of bump(|y - x|^2 / r_sum^2)
//             + log count of each non-empty shell sum,
//   particle: 2 log R + phi(R^{d+1}(|x| - R))
//             + sum over exterior spheres in the shell of bump(|y - x|^2 / r_sum^2)
//             + log count if non-empty.
// An empty shell contributes nothing (no log 0 term).
FieldValue psi_and_grad(ConstSpan x, PointType which, const PenalisationField& field);

// The region where psi is flat (gradient exactly zero) for the given type:
// inside B(0, R) and outside every exterior bump's support.
bool in_free_region(ConstSpan x, PointType which, const PenalisationField& field);

// Flat field value on the free region: 2 log R plus the log-count terms.
double free_region_value(PointType which, const PenalisationField& field);

// Monte Carlo estimate of the exp(-psi) mass over the complement of the free
// region. The ramp confines that mass to a thin annulus past R; sampling is
// truncated at R + 40 R^{-(d+1)}, beyond which the integrand contributes
// less than e^{-39} of the annulus mass.
VolumeEstimate complement_mass(const PenalisationField& field, PointType which,
                               std::int64_t mc_samples, std::uint64_t seed);

}  // namespace colloid
