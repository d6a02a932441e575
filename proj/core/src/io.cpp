#include "colloid/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace colloid {

namespace {

std::string line_error(const char* what, std::size_t line, const std::string& detail) {
    std::ostringstream out;
    out << what << " line " << line << ": " << detail;
    return out.str();
}

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string token;
    while (in >> token) tokens.push_back(token);
    return tokens;
}

bool parse_double_token(const std::string& token, double& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + token.size() && !token.empty();
}

bool parse_int_token(const std::string& token, std::int64_t& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtoll(begin, &end, 10);
    return end == begin + token.size() && !token.empty();
}

bool parse_uint_token(const std::string& token, std::uint64_t& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtoull(begin, &end, 10);
    return end == begin + token.size() && !token.empty() && token[0] != '-';
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

const char* container_name(ContainerKind kind) {
    switch (kind) {
        case ContainerKind::none: return "none";
        case ContainerKind::ball: return "ball";
        case ContainerKind::periodic_box: return "periodic_box";
    }
    return "none";
}

void write_header(std::ostream& out, const SnapshotHeader& h) {
    out << "# d = " << h.d << '\n';
    out << "# r_sphere = " << format_double(h.r_sphere) << '\n';
    out << "# r_particle = " << format_double(h.r_particle) << '\n';
    out << "# container = " << container_name(h.container) << '\n';
    if (h.container == ContainerKind::ball)
        out << "# ball_radius = " << format_double(h.ball_radius) << '\n';
    if (h.container == ContainerKind::periodic_box) {
        out << "# box_sides =";
        for (double side : h.box_sides) out << ' ' << format_double(side);
        out << '\n';
    }
    if (h.seed) out << "# seed = " << *h.seed << '\n';
    if (h.config_hash) out << "# config_hash = " << *h.config_hash << '\n';
}

// `# key = value` lines; unknown keys are ignored so files stay extensible
bool apply_header_line(const std::string& body, SnapshotHeader& h,
                       const char* what, std::size_t line_no) {
    std::size_t eq = body.find('=');
    if (eq == std::string::npos) return false;
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw std::runtime_error(line_error(what, line_no, "empty header key"));
    if (key == "d") {
        std::int64_t v = 0;
        if (!parse_int_token(value, v) || v < 1 || v > 16)
            throw std::runtime_error(line_error(what, line_no, "bad dimension '" + value + "'"));
        h.d = static_cast<int>(v);
    } else if (key == "r_sphere" || key == "r_particle" || key == "ball_radius") {
        double v = 0.0;
        if (!parse_double_token(value, v))
            throw std::runtime_error(line_error(what, line_no, "bad number '" + value + "'"));
        if (key == "r_sphere") h.r_sphere = v;
        else if (key == "r_particle") h.r_particle = v;
        else h.ball_radius = v;
    } else if (key == "container") {
        if (value == "none") h.container = ContainerKind::none;
        else if (value == "ball") h.container = ContainerKind::ball;
        else if (value == "periodic_box") h.container = ContainerKind::periodic_box;
        else
            throw std::runtime_error(line_error(what, line_no, "unknown container '" + value + "'"));
    } else if (key == "box_sides") {
        std::vector<double> sides;
        for (const auto& token : split_tokens(value)) {
            double v = 0.0;
            if (!parse_double_token(token, v))
                throw std::runtime_error(line_error(what, line_no, "bad side '" + token + "'"));
            sides.push_back(v);
        }
        h.box_sides = std::move(sides);
    } else if (key == "seed") {
        std::uint64_t v = 0;
        if (!parse_uint_token(value, v))
            throw std::runtime_error(line_error(what, line_no, "bad seed '" + value + "'"));
        h.seed = v;
    } else if (key == "config_hash") {
        h.config_hash = value;
    }
    return true;
}

void write_point_row(std::ostream& out, char type, std::int64_t id, ConstSpan x) {
    out << type << ' ' << id;
    for (double c : x) out << ' ' << format_double(c);
    out << '\n';
}

void append_point(TwoTypeConfiguration& config, char type, std::int64_t id,
                  const std::vector<double>& coords) {
    ConstSpan x(coords);
    if (type == 'S') config.add_sphere(x, id);
    else config.add_particle(x, id);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return in;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_int(std::int64_t x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(x));
    return buf;
}

SnapshotHeader header_for(const SimulationDomain& dom) {
    SnapshotHeader h;
    h.d = dom.d;
    h.r_sphere = dom.r_sphere;
    h.r_particle = dom.r_particle;
    h.container = dom.container;
    h.ball_radius = dom.ball_radius;
    h.box_sides = dom.box_sides;
    return h;
}

void apply_header(const SnapshotHeader& header, SimulationDomain& dom) {
    dom.d = header.d;
    dom.r_sphere = header.r_sphere;
    dom.r_particle = header.r_particle;
    dom.container = header.container;
    dom.ball_radius = header.ball_radius;
    dom.box_sides = header.box_sides;
}

void write_snapshot(std::ostream& out, const TwoTypeConfiguration& config,
                    const SnapshotHeader& header) {
    write_header(out, header);
    for (std::size_t i = 0; i < config.sphere_count(); ++i)
        write_point_row(out, 'S', config.sphere_id[i], config.sphere(i));
    for (std::size_t k = 0; k < config.particle_count(); ++k)
        write_point_row(out, 'P', config.particle_id[k], config.particle(k));
}

void write_snapshot_file(const std::string& path, const TwoTypeConfiguration& config,
                         const SnapshotHeader& header) {
    auto out = open_out(path);
    write_snapshot(out, config, header);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

Snapshot read_snapshot(std::istream& in) {
    Snapshot snap;
    std::string line;
    std::size_t line_no = 0;
    std::vector<double> coords;
    while (std::getline(in, line)) {
        ++line_no;
        std::string body = trim(line);
        if (body.empty()) continue;
        if (body[0] == '#') {
            apply_header_line(trim(body.substr(1)), snap.header, "snapshot", line_no);
            continue;
        }
        auto tokens = split_tokens(body);
        int d = snap.header.d;
        if (tokens.size() != static_cast<std::size_t>(d) + 2)
            throw std::runtime_error(line_error("snapshot", line_no,
                                                "expected 'S|P id' plus " +
                                                    std::to_string(d) + " coordinates"));
        if (tokens[0] != "S" && tokens[0] != "P")
            throw std::runtime_error(line_error("snapshot", line_no,
                                                "point type must be S or P, got '" +
                                                    tokens[0] + "'"));
        std::int64_t id = 0;
        if (!parse_int_token(tokens[1], id))
            throw std::runtime_error(line_error("snapshot", line_no,
                                                "bad id '" + tokens[1] + "'"));
        coords.assign(static_cast<std::size_t>(d), 0.0);
        for (int c = 0; c < d; ++c) {
            if (!parse_double_token(tokens[static_cast<std::size_t>(c) + 2], coords[c]))
                throw std::runtime_error(line_error(
                    "snapshot", line_no,
                    "bad coordinate '" + tokens[static_cast<std::size_t>(c) + 2] + "'"));
        }
        snap.config.d = d;
        append_point(snap.config, tokens[0][0], id, coords);
    }
    snap.config.d = snap.header.d;
    return snap;
}

Snapshot read_snapshot_file(const std::string& path) {
    auto in = open_in(path);
    return read_snapshot(in);
}

void write_trajectory(std::ostream& out, const TrajectoryRecord& traj,
                      const SnapshotHeader& header) {
    write_header(out, header);
    for (const auto& sample : traj.samples) {
        std::string t = format_double(sample.time);
        for (std::size_t i = 0; i < sample.config.sphere_count(); ++i) {
            out << t << ' ';
            write_point_row(out, 'S', sample.config.sphere_id[i], sample.config.sphere(i));
        }
        for (std::size_t k = 0; k < sample.config.particle_count(); ++k) {
            out << t << ' ';
            write_point_row(out, 'P', sample.config.particle_id[k], sample.config.particle(k));
        }
    }
}

void write_trajectory_file(const std::string& path, const TrajectoryRecord& traj,
                           const SnapshotHeader& header) {
    auto out = open_out(path);
    write_trajectory(out, traj, header);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

TrajectoryRecord read_trajectory(std::istream& in, SnapshotHeader* header) {
    TrajectoryRecord traj;
    SnapshotHeader h;
    std::string line;
    std::size_t line_no = 0;
    bool have_sample = false;
    double current_time = 0.0;
    std::vector<double> coords;
    while (std::getline(in, line)) {
        ++line_no;
        std::string body = trim(line);
        if (body.empty()) continue;
        if (body[0] == '#') {
            apply_header_line(trim(body.substr(1)), h, "trajectory", line_no);
            continue;
        }
        auto tokens = split_tokens(body);
        int d = h.d;
        if (tokens.size() != static_cast<std::size_t>(d) + 3)
            throw std::runtime_error(line_error("trajectory", line_no,
                                                "expected 't S|P id' plus " +
                                                    std::to_string(d) + " coordinates"));
        double t = 0.0;
        if (!parse_double_token(tokens[0], t))
            throw std::runtime_error(line_error("trajectory", line_no,
                                                "bad time '" + tokens[0] + "'"));
        if (tokens[1] != "S" && tokens[1] != "P")
            throw std::runtime_error(line_error("trajectory", line_no,
                                                "point type must be S or P, got '" +
                                                    tokens[1] + "'"));
        std::int64_t id = 0;
        if (!parse_int_token(tokens[2], id))
            throw std::runtime_error(line_error("trajectory", line_no,
                                                "bad id '" + tokens[2] + "'"));
        coords.assign(static_cast<std::size_t>(d), 0.0);
        for (int c = 0; c < d; ++c) {
            if (!parse_double_token(tokens[static_cast<std::size_t>(c) + 3], coords[c]))
                throw std::runtime_error(line_error(
                    "trajectory", line_no,
                    "bad coordinate '" + tokens[static_cast<std::size_t>(c) + 3] + "'"));
        }
        if (!have_sample || t != current_time) {
            traj.samples.push_back({t, TwoTypeConfiguration{}});
            traj.samples.back().config.d = d;
            have_sample = true;
            current_time = t;
        }
        append_point(traj.samples.back().config, tokens[1][0], id, coords);
    }
    if (header) *header = h;
    return traj;
}

TrajectoryRecord read_trajectory_file(const std::string& path, SnapshotHeader* header) {
    auto in = open_in(path);
    return read_trajectory(in, header);
}

void write_ledger(std::ostream& out, double time, const LocalTimeLedger& ledger) {
    std::string t = format_double(time);
    for (const auto& entry : ledger.entries()) {
        out << t << ' ' << entry.key.type_a << entry.key.type_b << ' '
            << entry.key.id_a << ' ' << entry.key.id_b << ' '
            << format_double(entry.value) << '\n';
    }
}

void write_ledger_file(const std::string& path, double time,
                       const LocalTimeLedger& ledger) {
    auto out = open_out(path);
    write_ledger(out, time, ledger);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void Report::set(const std::string& section, const std::string& key,
                 const std::string& value) {
    for (auto& [name, entries] : sections) {
        if (name == section) {
            for (auto& [k, v] : entries) {
                if (k == key) {
                    v = value;
                    return;
                }
            }
            entries.emplace_back(key, value);
            return;
        }
    }
    sections.emplace_back(section,
                          std::vector<std::pair<std::string, std::string>>{{key, value}});
}

void Report::set(const std::string& section, const std::string& key, double value) {
    set(section, key, format_double(value));
}

void Report::set(const std::string& section, const std::string& key, std::int64_t value) {
    set(section, key, format_int(value));
}

ReportTable& Report::table(const std::string& name) {
    for (auto& [n, t] : tables) {
        if (n == name) return t;
    }
    tables.emplace_back(name, ReportTable{});
    return tables.back().second;
}

void write_report(std::ostream& out, const Report& report) {
    bool first = true;
    for (const auto& [name, entries] : report.sections) {
        if (!first) out << '\n';
        first = false;
        out << '[' << name << "]\n";
        for (const auto& [key, value] : entries) out << key << " = " << value << '\n';
    }
    for (const auto& [name, table] : report.tables) {
        if (!first) out << '\n';
        first = false;
        out << "[table " << name << "]\n";
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) out << '\t';
            out << table.columns[c];
        }
        out << '\n';
        for (const auto& row : table.rows) {
            if (row.size() != table.columns.size())
                throw std::runtime_error("report table '" + name +
                                         "' row width does not match its columns");
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out << '\t';
                out << format_double(row[c]);
            }
            out << '\n';
        }
    }
}

void write_report_file(const std::string& path, const Report& report) {
    auto out = open_out(path);
    write_report(out, report);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace colloid
