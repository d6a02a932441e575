#include "colloid/depletion.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace colloid {

void DepletionParams::validate() const {
    if (d < 1) throw std::invalid_argument("depletion: dimension must be >= 1");
    if (!(r_sphere > 0.0)) throw std::invalid_argument("depletion: r_sphere must be positive");
    if (!(r_particle > 0.0) || !(r_particle < r_sphere))
        throw std::invalid_argument("depletion: need 0 < r_particle < r_sphere");
    if (activity < 0.0) throw std::invalid_argument("depletion: activity must be non-negative");
}

namespace {

// I_d(theta) = integral of sin^d on [0, theta] via the stable downward recurrence.
double sin_power_integral(int d, double theta) {
    double c = std::cos(theta);
    double s = std::sin(theta);
    double i_even = theta;      // I_0
    double i_odd = 1.0 - c;     // I_1
    if (d == 0) return i_even;
    if (d == 1) return i_odd;
    double sk = s;  // sin^{k-1} for k = 2
    for (int k = 2; k <= d; ++k) {
        double next = (-c * sk + (k - 1) * (k % 2 == 0 ? i_even : i_odd)) / k;
        if (k % 2 == 0)
            i_even = next;
        else
            i_odd = next;
        sk *= s;
    }
    return d % 2 == 0 ? i_even : i_odd;
}

void check_u(double u, const DepletionParams& p) {
    double u_min = p.r_sphere / p.r_sum();
    if (u < u_min - 1e-12)
        throw std::domain_error("overlap volume: separation below the hard-core limit");
}

void min_image_delta(const SimulationDomain& dom, const double* a, const double* b,
                     double* out) {
    if (dom.periodic()) {
        for (int k = 0; k < dom.d; ++k) {
            double dx = a[k] - b[k];
            double side = dom.box_sides[static_cast<std::size_t>(k)];
            dx -= side * std::round(dx / side);
            out[k] = dx;
        }
    } else {
        for (int k = 0; k < dom.d; ++k) out[k] = a[k] - b[k];
    }
}

void check_periodic_reach(const SimulationDomain& dom, double r) {
    if (!dom.periodic()) return;
    for (double side : dom.box_sides)
        if (side < 4.0 * r)
            throw std::invalid_argument(
                "depletion: periodic sides must be >= 4 (r_sphere + r_particle) so each "
                "pair overlaps through at most one image");
}

}  // namespace

double v_ovlap(double u, const DepletionParams& p) {
    check_u(u, p);
    if (u >= 1.0) return 0.0;
    double r = p.r_sum();
    double theta = std::acos(std::clamp(u, -1.0, 1.0));
    return 2.0 * unit_ball_volume(p.d - 1) * std::pow(r, p.d) * sin_power_integral(p.d, theta);
}

double v_ovlap_prime(double u, const DepletionParams& p) {
    check_u(u, p);
    if (u >= 1.0) return 0.0;
    double r = p.r_sum();
    return -2.0 * unit_ball_volume(p.d - 1) * std::pow(r, p.d) *
           std::pow(1.0 - u * u, 0.5 * (p.d - 1));
}

double pair_overlap_volume(double dist, const DepletionParams& p) {
    return v_ovlap(dist / (2.0 * p.r_sum()), p);
}

double energy(const std::vector<double>& sphere_centres, const SimulationDomain& dom,
              const DepletionParams& p) {
    double r = p.r_sum();
    check_periodic_reach(dom, r);
    auto dd = static_cast<std::size_t>(p.d);
    std::size_t n = sphere_centres.size() / dd;
    double total = static_cast<double>(n) * unit_ball_volume(p.d) * std::pow(r, p.d);
    double reach2 = 4.0 * r * r;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double d2 = dom.distance2(ConstSpan(sphere_centres.data() + i * dd, dd),
                                      ConstSpan(sphere_centres.data() + j * dd, dd));
            if (d2 < reach2) total -= v_ovlap(std::sqrt(d2) / (2.0 * r), p);
        }
    return total;
}

double conditional_energy(const std::vector<double>& inside,
                          const std::vector<double>& outside,
                          const SimulationDomain& dom, const DepletionParams& p) {
    double r = p.r_sum();
    check_periodic_reach(dom, r);
    auto dd = static_cast<std::size_t>(p.d);
    std::size_t n_in = inside.size() / dd;
    std::size_t n_out = outside.size() / dd;
    double total = static_cast<double>(n_in) * unit_ball_volume(p.d) * std::pow(r, p.d);
    double reach2 = 4.0 * r * r;
    auto at = [dd](const std::vector<double>& v, std::size_t i) {
        return ConstSpan(v.data() + i * dd, dd);
    };
    for (std::size_t i = 0; i < n_in; ++i) {
        for (std::size_t j = i + 1; j < n_in; ++j) {
            double d2 = dom.distance2(at(inside, i), at(inside, j));
            if (d2 < reach2) total -= v_ovlap(std::sqrt(d2) / (2.0 * r), p);
        }
        for (std::size_t j = 0; j < n_out; ++j) {
            double d2 = dom.distance2(at(inside, i), at(outside, j));
            if (d2 < reach2) total -= v_ovlap(std::sqrt(d2) / (2.0 * r), p);
        }
    }
    return total;
}

std::vector<double> grad_energy(const std::vector<double>& sphere_centres,
                                const SimulationDomain& dom, const DepletionParams& p) {
    double r = p.r_sum();
    check_periodic_reach(dom, r);
    auto dd = static_cast<std::size_t>(p.d);
    std::size_t n = sphere_centres.size() / dd;
    std::vector<double> grad(sphere_centres.size(), 0.0);
    std::vector<double> delta(dd);
    double reach2 = 4.0 * r * r;
    double front = unit_ball_volume(p.d - 1) * std::pow(r, p.d - 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            min_image_delta(dom, sphere_centres.data() + i * dd,
                            sphere_centres.data() + j * dd, delta.data());
            double d2 = dot(ConstSpan(delta.data(), dd), ConstSpan(delta.data(), dd));
            if (d2 >= reach2 || d2 == 0.0) continue;
            double dist = std::sqrt(d2);
            double u2 = d2 / (4.0 * r * r);
            double magnitude = front * std::pow(1.0 - u2, 0.5 * (p.d - 1)) / dist;
            for (std::size_t k = 0; k < dd; ++k) {
                double f = magnitude * delta[k];
                grad[i * dd + k] += f;
                grad[j * dd + k] -= f;
            }
        }
    return grad;
}

double critical_activity(const DepletionParams& p) {
    double shell = std::pow(p.r_sum(), p.d) - std::pow(p.r_sphere, p.d);
    return 1.0 / (std::pow(2.0, p.d) * shell * unit_ball_volume(p.d));
}

}  // namespace colloid
