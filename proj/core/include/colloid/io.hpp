#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "colloid/dynamics.hpp"
#include "colloid/geometry.hpp"

namespace colloid {

// All floating-point output uses %.17g so that text round trips reproduce
// every double bit for bit.
std::string format_double(double x);
std::string format_int(std::int64_t x);

struct SnapshotHeader {
    int d = 3;
    double r_sphere = 1.0;
    double r_particle = 0.1;
    ContainerKind container = ContainerKind::none;
    double ball_radius = 0.0;
    std::vector<double> box_sides;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> config_hash;
};

SnapshotHeader header_for(const SimulationDomain& dom);
void apply_header(const SnapshotHeader& header, SimulationDomain& dom);

// Snapshot rows: `S|P id x1 .. xd`, one point per line, after `# key = value`
// header lines describing the geometry.
void write_snapshot(std::ostream& out, const TwoTypeConfiguration& config,
                    const SnapshotHeader& header);
void write_snapshot_file(const std::string& path, const TwoTypeConfiguration& config,
                         const SnapshotHeader& header);

struct Snapshot {
    SnapshotHeader header;
    TwoTypeConfiguration config;
};

Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot_file(const std::string& path);

// Trajectory rows: `t S|P id x1 .. xd`.
void write_trajectory(std::ostream& out, const TrajectoryRecord& traj,
                      const SnapshotHeader& header);
void write_trajectory_file(const std::string& path, const TrajectoryRecord& traj,
                           const SnapshotHeader& header);
TrajectoryRecord read_trajectory(std::istream& in, SnapshotHeader* header = nullptr);
TrajectoryRecord read_trajectory_file(const std::string& path,
                                      SnapshotHeader* header = nullptr);

// Ledger rows: `t SS|SP id_a id_b value` with the accumulated totals at time t.
void write_ledger(std::ostream& out, double time, const LocalTimeLedger& ledger);
void write_ledger_file(const std::string& path, double time, const LocalTimeLedger& ledger);

// Report: named sections of `key = value` lines plus named tab-separated
// tables. Sections and keys keep insertion order.
struct ReportTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct Report {
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>
        sections;
    std::vector<std::pair<std::string, ReportTable>> tables;

    void set(const std::string& section, const std::string& key, const std::string& value);
    void set(const std::string& section, const std::string& key, double value);
    void set(const std::string& section, const std::string& key, std::int64_t value);
    ReportTable& table(const std::string& name);
};

void write_report(std::ostream& out, const Report& report);
void write_report_file(const std::string& path, const Report& report);

}  // namespace colloid
