#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "colloid/depletion.hpp"
#include "colloid/geometry.hpp"
#include "colloid/rng.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace colloid;

namespace {

DepletionParams params(int d, double rs, double rp) {
    DepletionParams p;
    p.d = d;
    p.r_sphere = rs;
    p.r_particle = rp;
    return p;
}

SimulationDomain domain_for(const DepletionParams& p) {
    SimulationDomain dom;
    dom.d = p.d;
    dom.r_sphere = p.r_sphere;
    dom.r_particle = p.r_particle;
    return dom;
}

}  // namespace

TEST_SUITE("depletion") {

TEST_CASE("overlap volume frozen values") {
    auto p3 = params(3, 0.6, 0.4);  // r_sum 1, frozen values below use r_sum = 1
    CHECK(v_ovlap(0.8, p3) == doctest::Approx(0.234572251468).epsilon(1e-9));
    CHECK(v_ovlap(1.0, p3) == 0.0);
    CHECK(v_ovlap(1.4, p3) == 0.0);

    auto contact = params(3, 1.0, 0.1);  // value at core contact, u = 1/1.1
    CHECK(v_ovlap(1.0 / 1.1, contact) == doctest::Approx(0.0670206432766).epsilon(1e-9));

    auto p2 = params(2, 0.45, 0.55);
    CHECK(v_ovlap(0.5, p2) == doctest::Approx(1.22836969861).epsilon(1e-9));

    // d = 1 overlap of two unit-length segments: 2 r (1 - u)
    auto p1 = params(1, 0.3, 0.2);
    CHECK(v_ovlap(0.7, p1) == doctest::Approx(2.0 * 0.5 * 0.3).epsilon(1e-12));

    CHECK_THROWS_AS(v_ovlap(0.5, contact), std::domain_error);  // below core contact
}

TEST_CASE("overlap volume matches the quadrature oracle across dimensions") {
    for (int d = 1; d <= 5; ++d) {
        auto p = params(d, 0.4, 0.35);  // r_sum 0.75, wide admissible u range
        double u_min = p.r_sphere / p.r_sum();
        for (double frac : {0.0, 0.2, 0.55, 0.9, 0.999}) {
            double u = u_min + frac * (1.0 - u_min);
            double want = oracle::ball_overlap(d, p.r_sum(), u);
            CHECK(v_ovlap(u, p) == doctest::Approx(want).epsilon(1e-10));
        }
    }
}

TEST_CASE("overlap derivative frozen values and finite differences") {
    auto p3 = params(3, 0.6, 0.4);
    CHECK(v_ovlap_prime(0.8, p3) ==
          doctest::Approx(-2.0 * std::numbers::pi_v<double> * 0.36).epsilon(1e-12));
    auto p2 = params(2, 0.45, 0.55);
    CHECK(v_ovlap_prime(0.5, p2) == doctest::Approx(-3.46410161514).epsilon(1e-9));
    CHECK(v_ovlap_prime(1.0, p2) == 0.0);

    for (int d = 1; d <= 4; ++d) {
        auto p = params(d, 0.4, 0.35);
        double u_min = p.r_sphere / p.r_sum();
        for (double frac : {0.1, 0.5, 0.85}) {
            double u = u_min + frac * (1.0 - u_min);
            double fd = oracle::central_diff([&](double t) { return v_ovlap(t, p); }, u);
            CHECK(v_ovlap_prime(u, p) == doctest::Approx(fd).epsilon(1e-7));
        }
    }
}

TEST_CASE("pair overlap volume is the half-separation reparametrisation") {
    auto p = params(3, 1.0, 0.1);
    CHECK(pair_overlap_volume(2.0, p) == doctest::Approx(v_ovlap(2.0 / 2.2, p)).epsilon(1e-14));
    CHECK(pair_overlap_volume(2.2, p) == 0.0);
    CHECK(pair_overlap_volume(3.0, p) == 0.0);
}

TEST_CASE("union volume energy closed values") {
    auto p = params(3, 1.0, 0.1);
    auto dom = domain_for(p);
    std::vector<double> one = {0.0, 0.0, 0.0};
    CHECK(energy(one, dom, p) == doctest::Approx(5.57527976257).epsilon(1e-10));

    std::vector<double> pair = {0.0, 0.0, 0.0, 2.0, 0.0, 0.0};
    CHECK(energy(pair, dom, p) == doctest::Approx(11.0835388819).epsilon(1e-10));

    std::vector<double> apart = {0.0, 0.0, 0.0, 2.2, 0.0, 0.0};
    CHECK(energy(apart, dom, p) == doctest::Approx(2.0 * 5.57527976257).epsilon(1e-10));

    CHECK(energy({}, dom, p) == 0.0);
}

TEST_CASE("conditional energy subtracts the frozen neighbourhood") {
    auto p = params(3, 1.0, 0.1);
    auto dom = domain_for(p);
    std::vector<double> inside = {0.0, 0.0, 0.0};
    std::vector<double> outside = {2.0, 0.0, 0.0};
    CHECK(conditional_energy(inside, outside, dom, p) ==
          doctest::Approx(5.50825911929).epsilon(1e-10));
    CHECK(conditional_energy(inside, {}, dom, p) ==
          doctest::Approx(energy(inside, dom, p)).epsilon(1e-14));

    // additivity: E(in | out) = E(in + out) - E(out)
    Rng rng(661);
    auto pp = params(2, 0.5, 0.07);
    auto dd = domain_for(pp);
    auto all = support::random_admissible(dd, 7, 0, rng, 4.0);
    std::vector<double> in3(all.sphere_x.begin(), all.sphere_x.begin() + 6);
    std::vector<double> out4(all.sphere_x.begin() + 6, all.sphere_x.end());
    CHECK(conditional_energy(in3, out4, dd, pp) ==
          doctest::Approx(energy(all.sphere_x, dd, pp) - energy(out4, dd, pp))
              .epsilon(1e-12));
}

TEST_CASE("energy is invariant under translation and relabeling") {
    Rng rng(17);
    auto p = params(3, 0.5, 0.07);
    auto dom = domain_for(p);
    auto config = support::random_admissible(dom, 6, 0, rng, 3.0);
    std::vector<double> centres = config.sphere_x;
    double base = energy(centres, dom, p);

    std::vector<double> shifted = centres;
    for (std::size_t i = 0; i < shifted.size(); i += 3) {
        shifted[i] += 11.5;
        shifted[i + 1] -= 3.25;
        shifted[i + 2] += 0.75;
    }
    CHECK(energy(shifted, dom, p) == doctest::Approx(base).epsilon(1e-12));

    std::vector<double> swapped = centres;
    for (int k = 0; k < 3; ++k) std::swap(swapped[k], swapped[9 + k]);
    CHECK(energy(swapped, dom, p) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("periodic energy wraps through the nearest image") {
    auto p = params(2, 0.5, 0.07);
    SimulationDomain dom = domain_for(p);
    dom.container = ContainerKind::periodic_box;
    dom.box_sides = {6.2, 6.2};
    std::vector<double> wrapped = {0.2, 3.0, 5.35, 3.0};  // image distance 1.05

    SimulationDomain free = domain_for(p);
    std::vector<double> direct = {0.0, 0.0, 1.05, 0.0};
    CHECK(energy(wrapped, dom, p) == doctest::Approx(energy(direct, free, p)).epsilon(1e-12));

    SimulationDomain tight = dom;
    tight.box_sides = {2.0, 2.0};  // below 4 r_sum
    CHECK_THROWS_AS(energy(wrapped, tight, p), std::invalid_argument);
}

TEST_CASE("gradient matches the contact pair closed form") {
    auto p = params(3, 1.0, 0.1);
    auto dom = domain_for(p);
    std::vector<double> pair = {0.0, 0.0, 0.0, 2.0, 0.0, 0.0};
    auto g = grad_energy(pair, dom, p);
    REQUIRE(g.size() == 6);
    CHECK(g[0] == doctest::Approx(-0.659734457254).epsilon(1e-9));
    CHECK(g[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(g[2] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(g[3] == doctest::Approx(0.659734457254).epsilon(1e-9));

    std::vector<double> apart = {0.0, 0.0, 0.0, 2.5, 0.0, 0.0};
    auto zero = grad_energy(apart, dom, p);
    for (double v : zero) CHECK(v == 0.0);
}

TEST_CASE("gradient matches central finite differences") {
    Rng rng(2024);
    for (int rep = 0; rep < 8; ++rep) {
        int d = 2 + (rep % 2);
        auto dd = static_cast<std::size_t>(d);
        auto p = params(d, 1.0, 0.15);
        SimulationDomain dom = domain_for(p);
        if (rep >= 4) {
            dom.container = ContainerKind::periodic_box;
            dom.box_sides.assign(dd, 7.0);
        }
        auto config = support::random_admissible(dom, 6, 0, rng, 6.0);
        std::vector<double> centres = config.sphere_x;
        auto g = grad_energy(centres, dom, p);
        double worst = 0.0;
        for (std::size_t k = 0; k < centres.size(); ++k) {
            double fd = oracle::central_diff(
                [&](double t) {
                    std::vector<double> moved = centres;
                    moved[k] = t;
                    return energy(moved, dom, p);
                },
                centres[k]);
            worst = std::max(worst, std::abs(g[k] - fd));
        }
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("critical activity frozen values and scaling") {
    CHECK(critical_activity(params(2, 0.5, 0.075)) ==
          doctest::Approx(0.98700739902).epsilon(1e-9));
    CHECK(critical_activity(params(3, 1.0, 0.1)) ==
          doctest::Approx(0.0901557457092).epsilon(1e-9));
    // shrinking the small type increases the summability threshold
    CHECK(critical_activity(params(2, 0.5, 0.05)) >
          critical_activity(params(2, 0.5, 0.075)));
}

TEST_CASE("parameter validation and regime limits") {
    CHECK(DepletionParams::pairwise_regime_limit() ==
          doctest::Approx(0.154700538379252).epsilon(1e-12));
    CHECK(params(2, 0.5, 0.077).pairwise_regime());
    CHECK(params(2, 0.5, 0.0773502691).pairwise_regime());  // boundary ratio
    CHECK_FALSE(params(2, 0.5, 0.08).pairwise_regime());

    auto bad = params(2, 0.5, 0.6);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = params(0, 0.5, 0.1);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = params(2, 0.5, 0.1);
    bad.activity = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_NOTHROW(params(2, 0.5, 0.1).validate());
}

}  // TEST_SUITE
