#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "colloid/penalisation.hpp"
#include "colloid/rng.hpp"
#include "oracles.hpp"

using namespace colloid;

namespace {

PenalisationField make_field(int d, double R, double rs = 0.5, double rp = 0.1) {
    PenalisationField f;
    f.d = d;
    f.R = R;
    f.r_sphere = rs;
    f.r_particle = rp;
    f.exterior.d = d;
    return f;
}

std::vector<double> ball_point(Rng& rng, int d, double radius) {
    auto dd = static_cast<std::size_t>(d);
    std::vector<double> x(dd);
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (auto& v : x) {
            v = rng.normal();
            n2 += v * v;
        }
    } while (n2 == 0.0);
    double r = radius * std::pow(rng.uniform_open(), 1.0 / d);
    for (auto& v : x) v *= r / std::sqrt(n2);
    return x;
}

}  // namespace

TEST_SUITE("penalisation") {

TEST_CASE("ramp and smoothstep shapes") {
    CHECK(smoothstep(-1.0) == 0.0);
    CHECK(smoothstep(0.0) == 0.0);
    CHECK(smoothstep(0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(smoothstep(1.0) == 1.0);
    CHECK(smoothstep(2.0) == 1.0);
    CHECK(smoothstep_prime(0.5) == doctest::Approx(1.875).epsilon(1e-14));
    CHECK(smoothstep_prime(0.0) == 0.0);
    CHECK(smoothstep_prime(1.0) == 0.0);

    CHECK(ramp(-3.0) == 0.0);
    CHECK(ramp(0.0) == 0.0);
    CHECK(ramp(0.5) == doctest::Approx(0.078125).epsilon(1e-14));
    CHECK(ramp(1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ramp(2.0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(ramp(10.0) == doctest::Approx(9.5).epsilon(1e-14));

    for (double t : {0.1, 0.35, 0.7, 0.95}) {
        CHECK(bump(t) == doctest::Approx(1.0 - smoothstep(t)).epsilon(1e-14));
        double fd_s = oracle::central_diff([](double v) { return smoothstep(v); }, t);
        CHECK(smoothstep_prime(t) == doctest::Approx(fd_s).epsilon(1e-7));
        double fd_r = oracle::central_diff([](double v) { return ramp(v); }, t);
        CHECK(ramp_prime(t) == doctest::Approx(fd_r).epsilon(1e-7));
        double fd_b = oracle::central_diff([](double v) { return bump(v); }, t);
        CHECK(bump_prime(t) == doctest::Approx(fd_b).epsilon(1e-7));
    }

    // monotone on [0,1]
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        double s = smoothstep(i / 100.0);
        CHECK(s >= prev);
        prev = s;
    }
}

TEST_CASE("confinement value and gradient at the scaled wall point") {
    for (int d : {2, 3}) {
        for (double R : {2.0, 3.0}) {
            auto field = make_field(d, R);
            double wall = std::pow(R, d + 1);
            auto dd = static_cast<std::size_t>(d);
            std::vector<double> x(dd, 0.0);
            x[0] = R + 2.0 / wall;
            auto fv = psi_and_grad(ConstSpan(x.data(), dd), PointType::sphere, field);
            CHECK(fv.value == doctest::Approx(2.0 * std::log(R) + 1.5).epsilon(1e-12));
            CHECK(norm(ConstSpan(fv.gradient.data(), dd)) ==
                  doctest::Approx(wall).epsilon(1e-12));
            CHECK(fv.gradient[0] > 0.0);  // pushes back toward the origin under -grad
        }
    }
}

TEST_CASE("field is flat with exactly zero gradient on the free region") {
    auto field = make_field(2, 3.0);
    double y0[2] = {3.2, 0.0};
    field.exterior.add_sphere(ConstSpan(y0, 2), 0);
    double y1[2] = {0.0, -3.3};
    field.exterior.add_particle(ConstSpan(y1, 2), 0);

    Rng rng(808);
    for (PointType which : {PointType::sphere, PointType::particle}) {
        double flat = free_region_value(which, field);
        int checked = 0, value_bad = 0, grad_bad = 0, negative = 0;
        for (int i = 0; i < 10000; ++i) {
            auto x = ball_point(rng, 2, 3.4);
            auto fv = psi_and_grad(ConstSpan(x.data(), 2), which, field);
            if (fv.value < 0.0) ++negative;
            if (!in_free_region(ConstSpan(x.data(), 2), which, field)) continue;
            ++checked;
            if (fv.value != flat) ++value_bad;
            if (fv.gradient[0] != 0.0 || fv.gradient[1] != 0.0) ++grad_bad;
        }
        CHECK(checked > 5000);
        CHECK(value_bad == 0);
        CHECK(grad_bad == 0);
        CHECK(negative == 0);
    }
}

TEST_CASE("gradient matches central finite differences near the wall") {
    auto field = make_field(2, 3.0);
    double y0[2] = {3.1, 0.4};
    field.exterior.add_sphere(ConstSpan(y0, 2), 0);
    double y1[2] = {-2.0, 2.45};  // radius ~3.16, within the particle-reach shell
    field.exterior.add_sphere(ConstSpan(y1, 2), 1);

    Rng rng(333);
    for (PointType which : {PointType::sphere, PointType::particle}) {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            // bias samples toward the annulus where the field varies
            double radius = rng.uniform() < 0.5 ? rng.uniform(2.0, 3.0 + 30.0 / 81.0)
                                                : rng.uniform(0.0, 3.4);
            auto x = ball_point(rng, 2, 1.0);
            double n = norm(ConstSpan(x.data(), 2));
            for (auto& v : x) v *= radius / n;
            auto fv = psi_and_grad(ConstSpan(x.data(), 2), which, field);
            for (std::size_t k = 0; k < 2; ++k) {
                double fd = oracle::central_diff(
                    [&](double t) {
                        auto moved = x;
                        moved[k] = t;
                        return psi_and_grad(ConstSpan(moved.data(), 2), which, field).value;
                    },
                    x[k]);
                double err = std::abs(fv.gradient[k] - fd) /
                             std::max(1.0, std::abs(fv.gradient[k]));
                worst = std::max(worst, err);
            }
        }
        CHECK(worst <= 1e-5);
    }
}

TEST_CASE("only shell exterior points contribute") {
    auto field = make_field(2, 3.0);
    double inside[2] = {0.0, 2.8};           // |y| < R: ignored
    double shell[2] = {3.2, 0.0};            // in shell for both reaches
    double beyond[2] = {3.0 + 1.2, 0.0};     // past 2 r_sphere = 1.0: ignored
    field.exterior.add_sphere(ConstSpan(inside, 2), 0);
    field.exterior.add_sphere(ConstSpan(shell, 2), 1);
    field.exterior.add_sphere(ConstSpan(beyond, 2), 2);

    // x close to the ignored interior point: still flat
    double near_inside[2] = {0.0, 2.5};
    CHECK(in_free_region(ConstSpan(near_inside, 2), PointType::sphere, field));

    // x within 2 r_sphere of the shell point: bump active for the sphere type
    double near_shell[2] = {2.45, 0.0};
    CHECK_FALSE(in_free_region(ConstSpan(near_shell, 2), PointType::sphere, field));
    // same x is farther than r_sum = 0.6 from the shell point: flat for particles
    CHECK(in_free_region(ConstSpan(near_shell, 2), PointType::particle, field));
    double particle_near[2] = {2.75, 0.0};  // 0.45 < 0.6 away from the shell point
    CHECK_FALSE(in_free_region(ConstSpan(particle_near, 2), PointType::particle, field));

    auto fv = psi_and_grad(ConstSpan(near_shell, 2), PointType::sphere, field);
    double u = 0.75 * 0.75 / 1.0;  // separation^2 / (2 r_sphere)^2
    CHECK(fv.value ==
          doctest::Approx(2.0 * std::log(3.0) + bump(u) + std::log(1.0)).epsilon(1e-12));

    // exterior particles never reach a mobile particle
    auto pf = make_field(2, 3.0);
    double py[2] = {3.1, 0.0};
    pf.exterior.add_particle(ConstSpan(py, 2), 0);
    double px[2] = {2.9, 0.0};
    CHECK(in_free_region(ConstSpan(px, 2), PointType::particle, pf));
    CHECK_FALSE(in_free_region(ConstSpan(px, 2), PointType::sphere, pf));
}

TEST_CASE("free region value counts non-empty shell groups") {
    auto field = make_field(2, 3.0, 0.5, 0.1);
    double s0[2] = {3.8, 0.0};
    double s1[2] = {0.0, 3.8};
    double s2[2] = {-3.8, 0.0};
    field.exterior.add_sphere(ConstSpan(s0, 2), 0);
    field.exterior.add_sphere(ConstSpan(s1, 2), 1);
    field.exterior.add_sphere(ConstSpan(s2, 2), 2);
    double p0[2] = {0.0, -3.25};
    double p1[2] = {2.3, -2.3};  // radius ~3.25, in the r_sum shell
    field.exterior.add_particle(ConstSpan(p0, 2), 0);
    field.exterior.add_particle(ConstSpan(p1, 2), 1);

    double two_log_r = 2.0 * std::log(3.0);
    CHECK(free_region_value(PointType::sphere, field) ==
          doctest::Approx(two_log_r + std::log(3.0) + std::log(2.0)).epsilon(1e-12));
    // particle type only sees exterior spheres, and only within r_sum = 0.6:
    // 3.8 > 3.0 + 0.6 excludes all three (a sphere still reaches out to 4.0)
    CHECK(free_region_value(PointType::particle, field) ==
          doctest::Approx(two_log_r).epsilon(1e-12));

    auto empty = make_field(2, 3.0);
    CHECK(free_region_value(PointType::sphere, empty) ==
          doctest::Approx(two_log_r).epsilon(1e-14));

    double origin[2] = {0.0, 0.0};
    auto fv = psi_and_grad(ConstSpan(origin, 2), PointType::sphere, field);
    CHECK(fv.value == free_region_value(PointType::sphere, field));
}

TEST_CASE("complement mass shrinks as the container grows") {
    double prev = 1e300;
    for (double R : {5.0, 10.0, 20.0}) {
        auto field = make_field(2, R);
        auto est = complement_mass(field, PointType::sphere, 100000, 91);
        CHECK(est.value > 0.0);
        CHECK(est.std_error > 0.0);
        CHECK(est.value + 3.0 * est.std_error < prev);
        prev = est.value - 3.0 * est.std_error;
    }
}

TEST_CASE("complement mass error shrinks like one over root samples") {
    auto field = make_field(2, 5.0);
    auto small = complement_mass(field, PointType::sphere, 50000, 7);
    auto large = complement_mass(field, PointType::sphere, 200000, 8);
    double ratio = large.std_error / small.std_error;
    CHECK(ratio > 0.35);
    CHECK(ratio < 0.65);  // expect ~0.5 from quadrupling the samples
    CHECK(std::abs(large.value - small.value) <=
          4.0 * std::sqrt(small.std_error * small.std_error +
                          large.std_error * large.std_error));
}

TEST_CASE("exterior bumps add measurable complement mass") {
    auto empty = make_field(2, 5.0);
    auto bumped = make_field(2, 5.0);
    double y[2] = {5.2, 0.0};
    bumped.exterior.add_sphere(ConstSpan(y, 2), 0);
    auto base = complement_mass(empty, PointType::sphere, 200000, 11);
    auto more = complement_mass(bumped, PointType::sphere, 200000, 12);
    double se = std::sqrt(base.std_error * base.std_error +
                          more.std_error * more.std_error);
    CHECK(more.value - base.value > 3.0 * se);
}

TEST_CASE("validation rejects malformed fields") {
    auto bad = make_field(2, 0.5);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = make_field(0, 3.0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = make_field(2, 3.0, 0.5, 0.7);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = make_field(2, 3.0);
    bad.exterior.d = 3;
    double y[3] = {3.2, 0.0, 0.0};
    bad.exterior.add_sphere(ConstSpan(y, 3), 0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_NOTHROW(make_field(3, 1.0).validate());

    CHECK_THROWS_AS(complement_mass(make_field(2, 3.0), PointType::sphere, 0, 1),
                    std::invalid_argument);
}

}  // TEST_SUITE
