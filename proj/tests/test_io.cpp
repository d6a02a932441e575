#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "colloid/dynamics.hpp"
#include "colloid/geometry.hpp"
#include "colloid/io.hpp"
#include "doctest.h"

using namespace colloid;

namespace {

std::string thrown_message(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

TwoTypeConfiguration awkward_config() {
    TwoTypeConfiguration config;
    config.d = 2;
    double s0[2] = {0.1 + 0.2, -1.0 / 3.0};
    double s1[2] = {1.0e-17, 2.5e17};
    double p0[2] = {-0.0, 7.25};
    config.add_sphere(ConstSpan(s0, 2), 4);
    config.add_sphere(ConstSpan(s1, 2), 9);
    config.add_particle(ConstSpan(p0, 2), 2);
    return config;
}

bool same_bits(double a, double b) {
    return a == b && std::signbit(a) == std::signbit(b);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("decimal text reproduces every double bit for bit") {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0, -0.0, 1e308,
                     4.9406564584124654e-324, 3.0000000000000004}) {
        std::string text = format_double(x);
        double back = std::strtod(text.c_str(), nullptr);
        CHECK(same_bits(back, x));
    }
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5) == "-2.5");
    CHECK(format_int(-42) == "-42");
    CHECK(format_int(9223372036854775807ll) == "9223372036854775807");
}

TEST_CASE("snapshot text round trips exactly") {
    SnapshotHeader header;
    header.d = 2;
    header.r_sphere = 0.5;
    header.r_particle = 0.075;
    header.container = ContainerKind::ball;
    header.ball_radius = 3.25;
    header.seed = 18446744073709551615ull;
    header.config_hash = "00ff00ff00ff00ff";

    auto config = awkward_config();
    std::ostringstream out;
    write_snapshot(out, config, header);
    std::string text = out.str();

    std::istringstream in(text);
    Snapshot snap = read_snapshot(in);
    CHECK(snap.header.d == 2);
    CHECK(snap.header.r_sphere == 0.5);
    CHECK(snap.header.r_particle == 0.075);
    CHECK(snap.header.container == ContainerKind::ball);
    CHECK(snap.header.ball_radius == 3.25);
    REQUIRE(snap.header.seed.has_value());
    CHECK(*snap.header.seed == 18446744073709551615ull);
    REQUIRE(snap.header.config_hash.has_value());
    CHECK(*snap.header.config_hash == "00ff00ff00ff00ff");

    REQUIRE(snap.config.sphere_count() == 2);
    REQUIRE(snap.config.particle_count() == 1);
    CHECK(snap.config.sphere_id == config.sphere_id);
    CHECK(snap.config.particle_id == config.particle_id);
    for (std::size_t c = 0; c < config.sphere_x.size(); ++c)
        CHECK(same_bits(snap.config.sphere_x[c], config.sphere_x[c]));
    for (std::size_t c = 0; c < config.particle_x.size(); ++c)
        CHECK(same_bits(snap.config.particle_x[c], config.particle_x[c]));

    // the canonical form is a fixed point of write(read(.))
    std::ostringstream again;
    write_snapshot(again, snap.config, snap.header);
    CHECK(again.str() == text);
}

TEST_CASE("snapshot headers map onto domains") {
    SimulationDomain dom;
    dom.d = 3;
    dom.r_sphere = 1.0;
    dom.r_particle = 0.1;
    dom.container = ContainerKind::periodic_box;
    dom.box_sides = {4.0, 5.0, 6.0};
    auto header = header_for(dom);
    CHECK(header.d == 3);
    CHECK(header.container == ContainerKind::periodic_box);
    CHECK(header.box_sides == dom.box_sides);

    SimulationDomain back;
    apply_header(header, back);
    CHECK(back.d == dom.d);
    CHECK(back.r_sphere == dom.r_sphere);
    CHECK(back.r_particle == dom.r_particle);
    CHECK(back.container == dom.container);
    CHECK(back.box_sides == dom.box_sides);
}

TEST_CASE("snapshot parsing is forgiving about layout but strict about rows") {
    SUBCASE("comments, blank lines and unknown keys pass through") {
        std::istringstream in(
            "# d = 2\n"
            "\n"
            "# this header line is prose, not a key\n"
            "# flavor = mint\n"
            "  S 0 1.5 -2.5  \n"
            "P 1 0 0\n");
        Snapshot snap = read_snapshot(in);
        CHECK(snap.config.sphere_count() == 1);
        CHECK(snap.config.particle_count() == 1);
        CHECK(snap.config.sphere(0)[0] == 1.5);
    }

    SUBCASE("errors carry the line number") {
        auto message = [](const std::string& text) {
            return thrown_message([text] {
                std::istringstream in(text);
                read_snapshot(in);
            });
        };
        CHECK(message("# d = 2\nS 0 1\n").find("snapshot line 2") !=
              std::string::npos);
        CHECK(message("# d = 2\nX 0 1 2\n").find("point type must be S or P") !=
              std::string::npos);
        CHECK(message("# d = 2\nS zero 1 2\n").find("bad id") != std::string::npos);
        CHECK(message("# d = 2\nS 0 1 what\n").find("bad coordinate") !=
              std::string::npos);
        CHECK(message("# d = 0\n").find("bad dimension") != std::string::npos);
        CHECK(message("# container = cube\n").find("unknown container") !=
              std::string::npos);
        CHECK(message("# seed = -3\n").find("bad seed") != std::string::npos);
        CHECK(message("# = 1\n").find("empty header key") != std::string::npos);
    }
}

TEST_CASE("trajectory text round trips with sample grouping") {
    SnapshotHeader header;
    header.d = 2;
    header.r_sphere = 0.5;
    header.r_particle = 0.075;

    TrajectoryRecord traj;
    for (int t = 0; t < 3; ++t) {
        TrajectorySample sample;
        sample.time = 0.5 * t;
        sample.config.d = 2;
        double a[2] = {0.1 * t, -1.0};
        sample.config.add_sphere(ConstSpan(a, 2), 7);
        if (t == 2) {
            double b[2] = {2.0, 2.0};
            sample.config.add_sphere(ConstSpan(b, 2), 8);
        }
        double p[2] = {0.25, 0.125 * t};
        sample.config.add_particle(ConstSpan(p, 2), 0);
        traj.samples.push_back(std::move(sample));
    }

    std::ostringstream out;
    write_trajectory(out, traj, header);
    std::istringstream in(out.str());
    SnapshotHeader got;
    TrajectoryRecord back = read_trajectory(in, &got);
    CHECK(got.d == 2);
    CHECK(got.r_sphere == 0.5);
    REQUIRE(back.samples.size() == 3);
    for (std::size_t t = 0; t < 3; ++t) {
        CHECK(back.samples[t].time == traj.samples[t].time);
        CHECK(back.samples[t].config.sphere_id == traj.samples[t].config.sphere_id);
        CHECK(back.samples[t].config.sphere_x == traj.samples[t].config.sphere_x);
        CHECK(back.samples[t].config.particle_x ==
              traj.samples[t].config.particle_x);
    }

    std::ostringstream again;
    write_trajectory(again, back, got);
    CHECK(again.str() == out.str());
}

TEST_CASE("trajectory rows group by change of time stamp") {
    std::istringstream in(
        "# d = 1\n"
        "0 S 0 1\n"
        "0 S 1 2\n"
        "1 S 0 1.5\n"
        "0 S 0 9\n");
    auto traj = read_trajectory(in);
    REQUIRE(traj.samples.size() == 3);  // a revisited time opens a new sample
    CHECK(traj.samples[0].config.sphere_count() == 2);
    CHECK(traj.samples[1].config.sphere_count() == 1);
    CHECK(traj.samples[2].config.sphere_count() == 1);
    CHECK(traj.samples[2].config.sphere(0)[0] == 9.0);

    auto message = thrown_message([] {
        std::istringstream bad(
            "# d = 1\n"
            "zero S 0 1\n");
        read_trajectory(bad);
    });
    CHECK(message.find("trajectory line 2") != std::string::npos);
    CHECK(message.find("bad time") != std::string::npos);
}

TEST_CASE("ledger rows are sorted and typed") {
    LocalTimeLedger ledger;
    ledger.accumulate(make_pair_key('S', 3, 'S', 1), 0.5);
    ledger.accumulate(make_pair_key('P', 5, 'S', 2), 0.25);
    ledger.accumulate(make_pair_key('S', 1, 'S', 3), 0.5);
    std::ostringstream out;
    write_ledger(out, 0.125, ledger);
    CHECK(out.str() ==
          "0.125 SS 1 3 1\n"
          "0.125 SP 2 5 0.25\n");
}

TEST_CASE("report sections keep insertion order and overwrite by key") {
    Report report;
    report.set("alpha", "a", 1.0);
    report.set("alpha", "b", std::int64_t{7});
    report.set("beta", "c", std::string("x y"));
    report.set("alpha", "a", 2.5);  // overwrites in place
    auto& table = report.table("grid");
    table.columns = {"u", "v"};
    table.rows.push_back({1.0, 0.5});
    table.rows.push_back({2.0, 0.25});
    CHECK(&report.table("grid") == &table);

    std::ostringstream out;
    write_report(out, report);
    CHECK(out.str() ==
          "[alpha]\n"
          "a = 2.5\n"
          "b = 7\n"
          "\n"
          "[beta]\n"
          "c = x y\n"
          "\n"
          "[table grid]\n"
          "u\tv\n"
          "1\t0.5\n"
          "2\t0.25\n");

    table.rows.push_back({3.0});
    std::ostringstream broken;
    CHECK_THROWS_AS(write_report(broken, report), std::runtime_error);
}

TEST_CASE("file helpers create and reject paths") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "colloid_io_test";
    fs::create_directories(dir);
    auto path = (dir / "snapshot.txt").string();

    SnapshotHeader header;
    header.d = 2;
    write_snapshot_file(path, awkward_config(), header);
    auto snap = read_snapshot_file(path);
    CHECK(snap.config.sphere_count() == 2);

    CHECK_THROWS_AS(read_snapshot_file((dir / "missing.txt").string()),
                    std::runtime_error);
    CHECK_THROWS_AS(
        write_snapshot_file((dir / "no_such_dir" / "x.txt").string(),
                            awkward_config(), header),
        std::runtime_error);
    fs::remove_all(dir);
}

}  // TEST_SUITE
