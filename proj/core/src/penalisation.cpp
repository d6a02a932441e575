#include "colloid/penalisation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "colloid/rng.hpp"
#include "colloid/stats.hpp"

namespace colloid {

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep_prime(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    double u = t * (t - 1.0);
    return 30.0 * u * u;
}

double bump(double t) { return 1.0 - smoothstep(t); }

double bump_prime(double t) { return -smoothstep_prime(t); }

double ramp(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return t - 0.5;
    return t * t * t * t * (2.5 + t * (-3.0 + t));
}

double ramp_prime(double t) { return smoothstep(t); }

void PenalisationField::validate() const {
    if (d < 1) throw std::invalid_argument("penalisation: dimension must be >= 1");
    if (!(R >= 1.0))
        throw std::invalid_argument("penalisation: R must be >= 1 so the field stays non-negative");
    if (!(r_sphere > 0.0)) throw std::invalid_argument("penalisation: r_sphere must be positive");
    if (!(r_particle > 0.0) || !(r_particle < r_sphere))
        throw std::invalid_argument("penalisation: need 0 < r_particle < r_sphere");
    if (exterior.d != d && (exterior.sphere_count() || exterior.particle_count()))
        throw std::invalid_argument("penalisation: exterior dimension mismatch");
}

namespace {

struct ShellTerm {
    const double* y = nullptr;  // exterior point
    double scale2 = 0.0;        // bump argument is |y - x|^2 / scale2
};

// Exterior points whose soft cores can reach B(0, R): those within the shell
// R <= |y| <= R + reach, where reach equals the bump-ball radius.
void collect_shell(const TwoTypeConfiguration& ext, bool spheres, double R, double radius,
                   std::vector<ShellTerm>& out, int d) {
    auto dd = static_cast<std::size_t>(d);
    std::size_t n = spheres ? ext.sphere_count() : ext.particle_count();
    const double* base = spheres ? ext.sphere_x.data() : ext.particle_x.data();
    for (std::size_t i = 0; i < n; ++i) {
        const double* y = base + i * dd;
        double r2 = 0.0;
        for (std::size_t k = 0; k < dd; ++k) r2 += y[k] * y[k];
        double r = std::sqrt(r2);
        if (r >= R && r <= R + radius) out.push_back({y, radius * radius});
    }
}

void shells_for(PointType which, const PenalisationField& field,
                std::vector<ShellTerm>& sphere_terms, std::vector<ShellTerm>& particle_terms) {
    sphere_terms.clear();
    particle_terms.clear();
    if (which == PointType::sphere) {
        collect_shell(field.exterior, true, field.R, 2.0 * field.r_sphere, sphere_terms,
                      field.d);
        collect_shell(field.exterior, false, field.R, field.r_sum(), particle_terms, field.d);
    } else {
        collect_shell(field.exterior, true, field.R, field.r_sum(), sphere_terms, field.d);
    }
}

}  // namespace

FieldValue psi_and_grad(ConstSpan x, PointType which, const PenalisationField& field) {
    auto dd = static_cast<std::size_t>(field.d);
    FieldValue out;
    out.gradient.assign(dd, 0.0);
    out.value = 2.0 * std::log(field.R);

    double r2 = dot(x, x);
    double r = std::sqrt(r2);
    double wall = std::pow(field.R, field.d + 1);
    double arg = wall * (r - field.R);
    out.value += ramp(arg);
    if (arg > 0.0 && r > 0.0) {
        double g = ramp_prime(arg) * wall / r;
        for (std::size_t k = 0; k < dd; ++k) out.gradient[k] += g * x[k];
    }

    std::vector<ShellTerm> sphere_terms, particle_terms;
    shells_for(which, field, sphere_terms, particle_terms);
    for (const auto* terms : {&sphere_terms, &particle_terms}) {
        if (terms->empty()) continue;
        for (const ShellTerm& t : *terms) {
            double sep2 = 0.0;
            for (std::size_t k = 0; k < dd; ++k) {
                double dxk = t.y[k] - x[k];
                sep2 += dxk * dxk;
            }
            double u = sep2 / t.scale2;
            if (u >= 1.0) continue;
            out.value += bump(u);
            double g = bump_prime(u) * 2.0 / t.scale2;
            for (std::size_t k = 0; k < dd; ++k) out.gradient[k] += g * (x[k] - t.y[k]);
        }
        out.value += std::log(static_cast<double>(terms->size()));
    }
    return out;
}

bool in_free_region(ConstSpan x, PointType which, const PenalisationField& field) {
    if (dot(x, x) > field.R * field.R) return false;
    std::vector<ShellTerm> sphere_terms, particle_terms;
    shells_for(which, field, sphere_terms, particle_terms);
    auto dd = static_cast<std::size_t>(field.d);
    for (const auto* terms : {&sphere_terms, &particle_terms})
        for (const ShellTerm& t : *terms) {
            double sep2 = 0.0;
            for (std::size_t k = 0; k < dd; ++k) {
                double dxk = t.y[k] - x[k];
                sep2 += dxk * dxk;
            }
            if (sep2 < t.scale2) return false;
        }
    return true;
}

double free_region_value(PointType which, const PenalisationField& field) {
    double value = 2.0 * std::log(field.R);
    std::vector<ShellTerm> sphere_terms, particle_terms;
    shells_for(which, field, sphere_terms, particle_terms);
    for (const auto* terms : {&sphere_terms, &particle_terms})
        if (!terms->empty()) value += std::log(static_cast<double>(terms->size()));
    return value;
}

VolumeEstimate complement_mass(const PenalisationField& field, PointType which,
                               std::int64_t mc_samples, std::uint64_t seed) {
    if (mc_samples < 1) throw std::invalid_argument("complement_mass: needs samples");
    field.validate();
    auto dd = static_cast<std::size_t>(field.d);

    double reach_in = which == PointType::sphere ? 2.0 * field.r_sphere : field.r_sum();
    double lo = std::max(0.0, field.R - reach_in);
    double hi = field.R + 40.0 * std::pow(field.R, -(field.d + 1));
    double lo_pow = std::pow(lo, field.d);
    double hi_pow = std::pow(hi, field.d);
    double volume = unit_ball_volume(field.d) * (hi_pow - lo_pow);

    Rng rng(seed);
    MeanAccumulator acc;
    std::vector<double> x(dd);
    for (std::int64_t s = 0; s < mc_samples; ++s) {
        double radius = std::pow(lo_pow + rng.uniform() * (hi_pow - lo_pow),
                                 1.0 / static_cast<double>(field.d));
        double n2 = 0.0;
        do {
            n2 = 0.0;
            for (std::size_t k = 0; k < dd; ++k) {
                x[k] = rng.normal();
                n2 += x[k] * x[k];
            }
        } while (n2 == 0.0);
        double inv = radius / std::sqrt(n2);
        for (std::size_t k = 0; k < dd; ++k) x[k] *= inv;

        double value = 0.0;
        if (!in_free_region(ConstSpan(x.data(), dd), which, field))
            value = std::exp(-psi_and_grad(ConstSpan(x.data(), dd), which, field).value);
        acc.add(value);
    }
    return {volume * acc.mean, volume * acc.std_error()};
}

}  // namespace colloid
