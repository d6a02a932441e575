#pragma once

// Shared test fixtures: random admissible configurations and scratch dirs.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "colloid/geometry.hpp"
#include "colloid/rng.hpp"

namespace support {

// Rejection-samples an admissible configuration inside the domain's
// container (or a [0, span]^d cube when the domain is unbounded).
inline colloid::TwoTypeConfiguration random_admissible(
        const colloid::SimulationDomain& dom, std::size_t spheres,
        std::size_t particles, colloid::Rng& rng, double span = 10.0) {
    auto dd = static_cast<std::size_t>(dom.d);
    std::vector<double> x(dd);
    auto draw = [&]() {
        if (dom.container == colloid::ContainerKind::periodic_box) {
            for (std::size_t k = 0; k < dd; ++k) x[k] = rng.uniform(0.0, dom.box_sides[k]);
        } else if (dom.container == colloid::ContainerKind::ball) {
            double n2 = 0.0;
            do {
                n2 = 0.0;
                for (std::size_t k = 0; k < dd; ++k) {
                    x[k] = rng.normal();
                    n2 += x[k] * x[k];
                }
            } while (n2 == 0.0);
            double r = dom.ball_radius *
                       std::pow(rng.uniform_open(), 1.0 / static_cast<double>(dom.d));
            for (std::size_t k = 0; k < dd; ++k) x[k] *= r / std::sqrt(n2);
        } else {
            for (std::size_t k = 0; k < dd; ++k) x[k] = rng.uniform(0.0, span);
        }
    };
    colloid::TwoTypeConfiguration config;
    config.d = dom.d;
    double ss = 2.0 * dom.r_sphere;
    double sp = dom.r_sum();
    for (std::size_t i = 0; i < spheres; ++i) {
        for (;;) {
            draw();
            bool ok = true;
            for (std::size_t j = 0; j < config.sphere_count() && ok; ++j)
                ok = dom.distance2(colloid::ConstSpan(x.data(), dd), config.sphere(j)) >=
                     ss * ss;
            for (std::size_t j = 0; j < dom.exterior.sphere_count() && ok; ++j)
                ok = dom.distance2(colloid::ConstSpan(x.data(), dd),
                                   dom.exterior.sphere(j)) >= ss * ss;
            if (ok) break;
        }
        config.add_sphere(colloid::ConstSpan(x.data(), dd),
                          static_cast<std::int64_t>(i));
    }
    for (std::size_t p = 0; p < particles; ++p) {
        for (;;) {
            draw();
            bool ok = true;
            for (std::size_t j = 0; j < config.sphere_count() && ok; ++j)
                ok = dom.distance2(colloid::ConstSpan(x.data(), dd), config.sphere(j)) >=
                     sp * sp;
            for (std::size_t j = 0; j < dom.exterior.sphere_count() && ok; ++j)
                ok = dom.distance2(colloid::ConstSpan(x.data(), dd),
                                   dom.exterior.sphere(j)) >= sp * sp;
            if (ok) break;
        }
        config.add_particle(colloid::ConstSpan(x.data(), dd),
                            static_cast<std::int64_t>(p));
    }
    return config;
}

// Fresh scratch directory under the system temp root, removed by the caller
// if desired; collisions avoided by a counter.
inline std::string scratch_dir(const std::string& tag) {
    static int counter = 0;
    auto base = std::filesystem::temp_directory_path() /
                ("colloid_test_" + tag + "_" + std::to_string(counter++));
    std::filesystem::remove_all(base);
    std::filesystem::create_directories(base);
    return base.string();
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

}  // namespace support
