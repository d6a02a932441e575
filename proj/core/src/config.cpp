#include "colloid/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "colloid/io.hpp"

namespace colloid {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

bool to_double(const std::string& token, double& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return !token.empty() && end == begin + token.size();
}

bool to_int(const std::string& token, std::int64_t& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtoll(begin, &end, 10);
    return !token.empty() && end == begin + token.size();
}

bool to_uint(const std::string& token, std::uint64_t& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtoull(begin, &end, 10);
    return !token.empty() && end == begin + token.size() && token[0] != '-';
}

const char* container_name(ContainerKind kind) {
    switch (kind) {
        case ContainerKind::none: return "none";
        case ContainerKind::ball: return "ball";
        case ContainerKind::periodic_box: return "periodic_box";
    }
    return "none";
}

const char* model_name(GibbsModel model) {
    switch (model) {
        case GibbsModel::two_type_hard_core: return "two_type_hard_core";
        case GibbsModel::one_type_depletion: return "one_type_depletion";
        case GibbsModel::penalised: return "penalised";
    }
    return "two_type_hard_core";
}

const char* initial_name(InitialKind kind) {
    switch (kind) {
        case InitialKind::empty: return "empty";
        case InitialKind::random: return "random";
        case InitialKind::file: return "file";
    }
    return "empty";
}

struct Parser {
    RunConfig cfg;
    std::vector<ConfigError>& errors;

    void bad(const std::string& loc, const std::string& msg) {
        errors.push_back({loc, msg});
    }
    void number(const std::string& loc, const std::string& value, double& target) {
        double v = 0.0;
        if (to_double(value, v)) target = v;
        else bad(loc, "not a number: '" + value + "'");
    }
    void integer(const std::string& loc, const std::string& value, std::int64_t& target) {
        std::int64_t v = 0;
        if (to_int(value, v)) target = v;
        else bad(loc, "not an integer: '" + value + "'");
    }
    void integer(const std::string& loc, const std::string& value, int& target) {
        std::int64_t v = 0;
        if (to_int(value, v) && v >= INT32_MIN && v <= INT32_MAX)
            target = static_cast<int>(v);
        else bad(loc, "not an integer: '" + value + "'");
    }
    void boolean(const std::string& loc, const std::string& value, bool& target) {
        if (value == "true") target = true;
        else if (value == "false") target = false;
        else bad(loc, "expected true or false, got '" + value + "'");
    }

    void key(const std::string& section, const std::string& name,
             const std::string& value) {
        std::string loc = section + "." + name;
        if (section == "run") run_key(loc, name, value);
        else if (section == "domain") domain_key(loc, name, value);
        else if (section == "model") model_key(loc, name, value);
        else if (section == "integrator") integrator_key(loc, name, value);
        else if (section == "mcmc") mcmc_key(loc, name, value);
        else if (section == "schedule") schedule_key(loc, name, value);
        else if (section == "initial") initial_key(loc, name, value);
    }

    void run_key(const std::string& loc, const std::string& name,
                 const std::string& value) {
        if (name == "mode") {
            auto mode = run_mode_from(value);
            if (mode) cfg.mode = *mode;
            else bad(loc, "unknown mode '" + value + "'");
        } else if (name == "seed") {
            std::uint64_t v = 0;
            if (to_uint(value, v)) cfg.seed = v;
            else bad(loc, "not an unsigned integer: '" + value + "'");
        } else if (name == "out_dir") {
            cfg.out_dir = value;
        } else {
            bad(loc, "unknown key");
        }
    }

    void domain_key(const std::string& loc, const std::string& name,
                    const std::string& value) {
        if (name == "d") integer(loc, value, cfg.domain.d);
        else if (name == "r_sphere") number(loc, value, cfg.domain.r_sphere);
        else if (name == "r_particle") number(loc, value, cfg.domain.r_particle);
        else if (name == "sigma") number(loc, value, cfg.domain.sigma);
        else if (name == "container") {
            if (value == "none") cfg.domain.container = ContainerKind::none;
            else if (value == "ball") cfg.domain.container = ContainerKind::ball;
            else if (value == "periodic_box")
                cfg.domain.container = ContainerKind::periodic_box;
            else bad(loc, "unknown container '" + value + "'");
        } else if (name == "ball_radius") {
            number(loc, value, cfg.domain.ball_radius);
        } else if (name == "box_sides") {
            std::vector<double> sides;
            std::istringstream in(value);
            std::string token;
            bool ok = true;
            while (in >> token) {
                double v = 0.0;
                if (to_double(token, v)) sides.push_back(v);
                else {
                    bad(loc, "not a number: '" + token + "'");
                    ok = false;
                }
            }
            if (ok) cfg.domain.box_sides = std::move(sides);
        } else if (name == "exterior_file") {
            cfg.exterior_file = value;
        } else {
            bad(loc, "unknown key");
        }
    }

    void model_key(const std::string& loc, const std::string& name,
                   const std::string& value) {
        if (name == "kind") {
            if (value == "two_type_hard_core") cfg.model = GibbsModel::two_type_hard_core;
            else if (value == "one_type_depletion")
                cfg.model = GibbsModel::one_type_depletion;
            else if (value == "penalised") cfg.model = GibbsModel::penalised;
            else bad(loc, "unknown model '" + value + "'");
        } else if (name == "z_sphere") {
            number(loc, value, cfg.z_sphere);
        } else if (name == "z_particle") {
            number(loc, value, cfg.z_particle);
        } else if (name == "penalisation_radius") {
            number(loc, value, cfg.penalisation_radius);
        } else {
            bad(loc, "unknown key");
        }
    }

    void integrator_key(const std::string& loc, const std::string& name,
                        const std::string& value) {
        if (name == "time_step") number(loc, value, cfg.integrator.time_step);
        else if (name == "max_projection_sweeps")
            integer(loc, value, cfg.integrator.max_projection_sweeps);
        else if (name == "projection_tolerance")
            number(loc, value, cfg.integrator.projection_tolerance);
        else if (name == "admissibility_slack")
            number(loc, value, cfg.integrator.admissibility_slack);
        else if (name == "zero_noise") boolean(loc, value, cfg.integrator.zero_noise);
        else if (name == "horizon") number(loc, value, cfg.horizon);
        else if (name == "sample_every") integer(loc, value, cfg.sample_every);
        else bad(loc, "unknown key");
    }

    void mcmc_key(const std::string& loc, const std::string& name,
                  const std::string& value) {
        if (name == "p_birth") number(loc, value, cfg.mcmc.p_birth);
        else if (name == "p_death") number(loc, value, cfg.mcmc.p_death);
        else if (name == "translate_scale") number(loc, value, cfg.mcmc.translate_scale);
        else if (name == "full_recompute_every")
            integer(loc, value, cfg.mcmc.full_recompute_every);
        else if (name == "energy_drift_tolerance")
            number(loc, value, cfg.mcmc.energy_drift_tolerance);
        else if (name == "burn_in") integer(loc, value, cfg.burn_in);
        else if (name == "thin") integer(loc, value, cfg.thin);
        else if (name == "count") integer(loc, value, cfg.count);
        else bad(loc, "unknown key");
    }

    void schedule_key(const std::string& loc, const std::string& name,
                      const std::string& value) {
        if (name == "alpha") number(loc, value, cfg.schedule.alpha);
        else if (name == "delta") number(loc, value, cfg.schedule.delta);
        else if (name == "kappa") integer(loc, value, cfg.schedule.kappa);
        else if (name == "eps") number(loc, value, cfg.schedule.eps);
        else if (name == "rho") number(loc, value, cfg.schedule.rho);
        else if (name == "radius") number(loc, value, cfg.schedule_radius);
        else if (name == "replicas") integer(loc, value, cfg.replicas);
        else bad(loc, "unknown key");
    }

    void initial_key(const std::string& loc, const std::string& name,
                     const std::string& value) {
        if (name == "kind") {
            if (value == "empty") cfg.initial.kind = InitialKind::empty;
            else if (value == "random") cfg.initial.kind = InitialKind::random;
            else if (value == "file") cfg.initial.kind = InitialKind::file;
            else bad(loc, "unknown initial kind '" + value + "'");
        } else if (name == "file") {
            cfg.initial.file = value;
        } else if (name == "spheres") {
            integer(loc, value, cfg.initial.spheres);
        } else if (name == "particles") {
            integer(loc, value, cfg.initial.particles);
        } else if (name == "placement_attempts") {
            integer(loc, value, cfg.initial.placement_attempts);
        } else {
            bad(loc, "unknown key");
        }
    }
};

const std::set<std::string>& known_sections() {
    static const std::set<std::string> sections = {
        "run", "domain", "model", "integrator", "mcmc", "schedule", "initial"};
    return sections;
}

}  // namespace

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::simulate: return "simulate";
        case RunMode::sample: return "sample";
        case RunMode::analyze: return "analyze";
        case RunMode::verify_bounds: return "verify-bounds";
        case RunMode::equivalence: return "equivalence";
    }
    return "simulate";
}

std::optional<RunMode> run_mode_from(const std::string& text) {
    if (text == "simulate") return RunMode::simulate;
    if (text == "sample") return RunMode::sample;
    if (text == "analyze") return RunMode::analyze;
    if (text == "verify-bounds" || text == "verify_bounds") return RunMode::verify_bounds;
    if (text == "equivalence") return RunMode::equivalence;
    return std::nullopt;
}

ParseResult parse_config(const std::string& text) {
    ParseResult result;
    Parser parser{RunConfig{}, result.errors};
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::string section;
    bool section_known = false;
    std::set<std::string> seen;

    while (std::getline(in, line)) {
        ++line_no;
        std::string body = trim(line);
        if (body.empty() || body[0] == '#') continue;
        std::string loc = "line " + std::to_string(line_no);
        if (body.front() == '[') {
            if (body.back() != ']') {
                parser.bad(loc, "unterminated section head");
                section_known = false;
                continue;
            }
            section = trim(body.substr(1, body.size() - 2));
            section_known = known_sections().count(section) > 0;
            if (!section_known) parser.bad(loc, "unknown section '" + section + "'");
            continue;
        }
        std::size_t eq = body.find('=');
        if (eq == std::string::npos) {
            parser.bad(loc, "expected 'key = value'");
            continue;
        }
        std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        if (key.empty()) {
            parser.bad(loc, "empty key");
            continue;
        }
        if (section.empty()) {
            parser.bad(loc, "key '" + key + "' outside any section");
            continue;
        }
        if (!section_known) continue;
        if (value.empty()) {
            parser.bad(section + "." + key, "empty value");
            continue;
        }
        if (!seen.insert(section + "." + key).second) {
            parser.bad(section + "." + key, "duplicate key");
            continue;
        }
        parser.key(section, key, value);
    }

    if (result.errors.empty()) result.config = std::move(parser.cfg);
    return result;
}

ParseResult parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ParseResult result;
        result.errors.push_back({path, "cannot open config file"});
        return result;
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string render_config(const RunConfig& c) {
    std::ostringstream out;
    out << "[run]\n";
    out << "mode = " << to_string(c.mode) << '\n';
    if (c.seed) out << "seed = " << *c.seed << '\n';
    out << "out_dir = " << c.out_dir << '\n';

    out << "\n[domain]\n";
    out << "d = " << c.domain.d << '\n';
    out << "r_sphere = " << format_double(c.domain.r_sphere) << '\n';
    out << "r_particle = " << format_double(c.domain.r_particle) << '\n';
    out << "sigma = " << format_double(c.domain.sigma) << '\n';
    out << "container = " << container_name(c.domain.container) << '\n';
    if (c.domain.container == ContainerKind::ball)
        out << "ball_radius = " << format_double(c.domain.ball_radius) << '\n';
    if (c.domain.container == ContainerKind::periodic_box) {
        out << "box_sides =";
        for (double side : c.domain.box_sides) out << ' ' << format_double(side);
        out << '\n';
    }
    if (!c.exterior_file.empty()) out << "exterior_file = " << c.exterior_file << '\n';

    out << "\n[model]\n";
    out << "kind = " << model_name(c.model) << '\n';
    out << "z_sphere = " << format_double(c.z_sphere) << '\n';
    out << "z_particle = " << format_double(c.z_particle) << '\n';
    out << "penalisation_radius = " << format_double(c.penalisation_radius) << '\n';

    out << "\n[integrator]\n";
    out << "time_step = " << format_double(c.integrator.time_step) << '\n';
    out << "max_projection_sweeps = " << c.integrator.max_projection_sweeps << '\n';
    out << "projection_tolerance = " << format_double(c.integrator.projection_tolerance)
        << '\n';
    out << "admissibility_slack = " << format_double(c.integrator.admissibility_slack)
        << '\n';
    out << "zero_noise = " << (c.integrator.zero_noise ? "true" : "false") << '\n';
    out << "horizon = " << format_double(c.horizon) << '\n';
    out << "sample_every = " << format_int(c.sample_every) << '\n';

    out << "\n[mcmc]\n";
    out << "p_birth = " << format_double(c.mcmc.p_birth) << '\n';
    out << "p_death = " << format_double(c.mcmc.p_death) << '\n';
    out << "translate_scale = " << format_double(c.mcmc.translate_scale) << '\n';
    out << "full_recompute_every = " << format_int(c.mcmc.full_recompute_every) << '\n';
    out << "energy_drift_tolerance = "
        << format_double(c.mcmc.energy_drift_tolerance) << '\n';
    out << "burn_in = " << format_int(c.burn_in) << '\n';
    out << "thin = " << format_int(c.thin) << '\n';
    out << "count = " << format_int(c.count) << '\n';

    out << "\n[schedule]\n";
    out << "alpha = " << format_double(c.schedule.alpha) << '\n';
    out << "delta = " << format_double(c.schedule.delta) << '\n';
    out << "kappa = " << c.schedule.kappa << '\n';
    out << "eps = " << format_double(c.schedule.eps) << '\n';
    out << "rho = " << format_double(c.schedule.rho) << '\n';
    out << "radius = " << format_double(c.schedule_radius) << '\n';
    out << "replicas = " << format_int(c.replicas) << '\n';

    out << "\n[initial]\n";
    out << "kind = " << initial_name(c.initial.kind) << '\n';
    if (!c.initial.file.empty()) out << "file = " << c.initial.file << '\n';
    out << "spheres = " << format_int(c.initial.spheres) << '\n';
    out << "particles = " << format_int(c.initial.particles) << '\n';
    out << "placement_attempts = " << format_int(c.initial.placement_attempts) << '\n';
    return out.str();
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char byte : text) {
        hash ^= byte;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string config_hash(const RunConfig& config) {
    // where artifacts land does not affect results, so it stays out of the hash
    RunConfig keyed = config;
    keyed.out_dir = ".";
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(render_config(keyed))));
    return buf;
}

std::vector<ConfigError> validate(const RunConfig& c) {
    std::vector<ConfigError> errors;
    auto bad = [&](const std::string& loc, const std::string& msg) {
        errors.push_back({loc, msg});
    };

    if (!c.seed) bad("run.seed", "a seed is required; there is no wall-clock default");
    if (c.out_dir.empty()) bad("run.out_dir", "output directory must not be empty");

    if (c.domain.d < 1 || c.domain.d > 8)
        bad("domain.d", "dimension must be between 1 and 8");
    if (!(c.domain.r_sphere > 0.0)) bad("domain.r_sphere", "r_sphere must be positive");
    if (!(c.domain.r_particle > 0.0) || !(c.domain.r_particle < c.domain.r_sphere))
        bad("domain.r_particle", "r_particle must satisfy 0 < r_particle < r_sphere");
    if (!(c.domain.sigma > 0.0)) bad("domain.sigma", "sigma must be positive");
    if (c.domain.container == ContainerKind::ball && !(c.domain.ball_radius > 0.0))
        bad("domain.ball_radius", "ball container needs a positive radius");
    if (c.domain.container == ContainerKind::periodic_box) {
        if (c.domain.box_sides.size() != static_cast<std::size_t>(c.domain.d))
            bad("domain.box_sides", "need exactly d box sides");
        for (double side : c.domain.box_sides) {
            if (!(side > 0.0)) {
                bad("domain.box_sides", "box sides must be positive");
                break;
            }
        }
    }

    if (!(c.z_sphere >= 0.0)) bad("model.z_sphere", "activity must be non-negative");
    if (!(c.z_particle >= 0.0)) bad("model.z_particle", "activity must be non-negative");
    if (c.model == GibbsModel::one_type_depletion && c.domain.r_sphere > 0.0) {
        double limit = 2.0 / std::sqrt(3.0) - 1.0;
        if (c.domain.r_particle / c.domain.r_sphere > limit)
            bad("model.kind",
                "one-type depletion needs r_particle / r_sphere <= 2/sqrt(3) - 1");
    }
    if (c.model == GibbsModel::penalised) {
        if (!(c.penalisation_radius >= 1.0))
            bad("model.penalisation_radius", "the soft-wall field needs radius >= 1");
        if (c.domain.container != ContainerKind::none)
            bad("domain.container", "the penalised model runs without a container");
    } else if (c.penalisation_radius != 0.0) {
        bad("model.penalisation_radius", "only the penalised model takes a radius");
    }

    if (!(c.integrator.time_step >= 0.0))
        bad("integrator.time_step", "time step must be non-negative (zero = default)");
    if (c.integrator.max_projection_sweeps < 1)
        bad("integrator.max_projection_sweeps", "need at least one sweep");
    if (!(c.integrator.projection_tolerance >= 0.0))
        bad("integrator.projection_tolerance", "tolerance must be non-negative");
    if (!(c.integrator.admissibility_slack >= 0.0))
        bad("integrator.admissibility_slack", "slack must be non-negative");
    if (!(c.horizon >= 0.0)) bad("integrator.horizon", "horizon must be non-negative");
    if (c.sample_every < 1) bad("integrator.sample_every", "sample_every must be >= 1");

    if (!(c.mcmc.p_birth >= 0.0) || !(c.mcmc.p_death >= 0.0) ||
        c.mcmc.p_birth + c.mcmc.p_death > 1.0)
        bad("mcmc.p_birth", "proposal probabilities need p_birth, p_death >= 0 "
                            "and p_birth + p_death <= 1");
    if (!(c.mcmc.translate_scale > 0.0))
        bad("mcmc.translate_scale", "translate kick scale must be positive");
    if (c.mcmc.full_recompute_every < 1)
        bad("mcmc.full_recompute_every", "recompute period must be >= 1");
    if (!(c.mcmc.energy_drift_tolerance > 0.0))
        bad("mcmc.energy_drift_tolerance", "drift tolerance must be positive");
    if (c.burn_in < 0) bad("mcmc.burn_in", "burn-in must be non-negative");
    if (c.thin < 1) bad("mcmc.thin", "thin must be >= 1");
    if (c.count < 1) bad("mcmc.count", "count must be >= 1");

    if (c.schedule_radius != 0.0 && !(c.schedule_radius >= 8.0))
        bad("schedule.radius", "the derived schedule needs radius >= 8");
    if (c.schedule_radius == 0.0 && c.mode == RunMode::verify_bounds) {
        if (c.schedule.kappa < 1) bad("schedule.kappa", "kappa must be >= 1");
        if (!(c.schedule.delta > 0.0)) bad("schedule.delta", "delta must be positive");
        if (!(c.schedule.eps > 0.0)) bad("schedule.eps", "eps must be positive");
    }
    if (c.replicas < 1) bad("schedule.replicas", "replicas must be >= 1");

    if (c.initial.kind == InitialKind::file && c.initial.file.empty())
        bad("initial.file", "initial kind 'file' needs a file path");
    if (c.initial.kind == InitialKind::random) {
        if (c.initial.spheres < 0 || c.initial.particles < 0)
            bad("initial.spheres", "random initial counts must be non-negative");
        if (c.initial.placement_attempts < 1)
            bad("initial.placement_attempts", "need at least one placement attempt");
        if (c.domain.container == ContainerKind::none &&
            c.model != GibbsModel::penalised)
            bad("initial.kind", "random placement needs a bounded container");
    }
    if (c.mode == RunMode::analyze &&
        (c.initial.kind != InitialKind::file || c.initial.file.empty()))
        bad("initial.file", "analyze reads the artifact named by initial.file");
    if (c.model == GibbsModel::one_type_depletion && c.initial.particles > 0)
        bad("initial.particles", "the one-type model has no mobile particles");

    if (c.mode == RunMode::sample || c.mode == RunMode::equivalence) {
        if (c.model != GibbsModel::penalised &&
            c.domain.container == ContainerKind::none)
            bad("domain.container", "sampling needs a bounded container");
    }
    return errors;
}

}  // namespace colloid
