#include "colloid/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace colloid {

IntegratorSettings IntegratorSettings::defaults_for(const SimulationDomain& dom) {
    IntegratorSettings s;
    s.time_step = 1e-4 * dom.r_sphere * dom.r_sphere;
    s.projection_tolerance = 1e-10 * dom.r_sphere;
    s.admissibility_slack = 1e-12 * dom.r_sphere;
    return s;
}

void IntegratorSettings::validate() const {
    if (!(time_step > 0.0)) throw std::invalid_argument("integrator: time_step must be positive");
    if (max_projection_sweeps < 1)
        throw std::invalid_argument("integrator: need at least one projection sweep");
    if (!(projection_tolerance > 0.0))
        throw std::invalid_argument("integrator: projection_tolerance must be positive");
    if (admissibility_slack < 0.0)
        throw std::invalid_argument("integrator: admissibility_slack must be non-negative");
}

void LocalTimeLedger::accumulate(const PairKey& key, double increment) {
    std::size_t i = find(key);
    if (i == entries_.size()) {
        entries_.push_back({key, increment});
    } else {
        entries_[i].value += increment;
    }
}

double LocalTimeLedger::total(const PairKey& key) const {
    std::size_t i = find(key);
    return i == entries_.size() ? 0.0 : entries_[i].value;
}

double LocalTimeLedger::total_all() const {
    double s = 0.0;
    for (const auto& e : entries_) s += e.value;
    return s;
}

std::vector<LedgerEntry> LocalTimeLedger::entries() const {
    auto out = entries_;
    std::sort(out.begin(), out.end(), [](const LedgerEntry& a, const LedgerEntry& b) {
        return pair_key_less(a.key, b.key);
    });
    return out;
}

void LocalTimeLedger::clear() { entries_.clear(); }

std::size_t LocalTimeLedger::find(const PairKey& key) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].key == key) return i;
    return entries_.size();
}

namespace {

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

void wrap_into_box(std::vector<double>& coords, const SimulationDomain& dom) {
    if (!dom.periodic()) return;
    auto dd = static_cast<std::size_t>(dom.d);
    for (std::size_t i = 0; i < coords.size(); ++i) {
        double side = dom.box_sides[i % dd];
        double w = std::fmod(coords[i], side);
        if (w < 0.0) w += side;
        coords[i] = w;
    }
}

struct Correction {
    double* a;                 // mobile end, takes fraction wa of the gap
    const double* b;           // other end
    double* b_mut;             // nullptr when b is a frozen exterior point
    double wa;
    double threshold;          // contact separation
    double ledger_scale;       // local-time increment per unit gap
    PairKey key;
};

// One Gauss-Seidel pass over every constraint pair in the fixed key order.
// Each violated pair is pushed exactly to its contact separation.
void sweep_pairs(std::vector<Correction>& pairs, const SimulationDomain& dom,
                 LocalTimeLedger* ledger) {
    auto dd = static_cast<std::size_t>(dom.d);
    std::vector<double> delta(dd);
    for (auto& c : pairs) {
        min_image_delta(dom, c.a, c.b, delta.data());
        double d2 = 0.0;
        for (std::size_t k = 0; k < dd; ++k) d2 += delta[k] * delta[k];
        double dist = std::sqrt(d2);
        if (dist >= c.threshold) continue;
        double gap = c.threshold - dist;
        if (dist == 0.0) {
            delta[0] = 1.0;
            for (std::size_t k = 1; k < dd; ++k) delta[k] = 0.0;
            dist = 1.0;
        }
        for (std::size_t k = 0; k < dd; ++k) {
            double unit = delta[k] / dist;
            c.a[k] += unit * gap * c.wa;
            if (c.b_mut) c.b_mut[k] -= unit * gap * (1.0 - c.wa);
        }
        if (ledger) ledger->accumulate(c.key, gap * c.ledger_scale);
    }
}

double worst_violation(const std::vector<Correction>& pairs, const SimulationDomain& dom) {
    auto dd = static_cast<std::size_t>(dom.d);
    std::vector<double> delta(dd);
    double worst = 0.0;
    for (const auto& c : pairs) {
        min_image_delta(dom, c.a, c.b, delta.data());
        double d2 = 0.0;
        for (std::size_t k = 0; k < dd; ++k) d2 += delta[k] * delta[k];
        worst = std::max(worst, c.threshold - std::sqrt(d2));
    }
    return worst;
}

}  // namespace

int resolve_overlaps(TwoTypeConfiguration& config, const SimulationDomain& dom,
                     const IntegratorSettings& settings, LocalTimeLedger* ledger) {
    auto dd = static_cast<std::size_t>(config.d);
    std::size_t ns = config.sphere_count();
    std::size_t np = config.particle_count();
    double ss = 2.0 * dom.r_sphere;
    double sp = dom.r_sum();
    double s2 = dom.sigma * dom.sigma;
    double w_sphere = 1.0 / (1.0 + s2);

    // index orderings by id so the sweep order is the fixed key order
    std::vector<std::size_t> s_order(ns), p_order(np);
    for (std::size_t i = 0; i < ns; ++i) s_order[i] = i;
    for (std::size_t k = 0; k < np; ++k) p_order[k] = k;
    std::sort(s_order.begin(), s_order.end(), [&](std::size_t a, std::size_t b) {
        return config.sphere_id[a] < config.sphere_id[b];
    });
    std::sort(p_order.begin(), p_order.end(), [&](std::size_t a, std::size_t b) {
        return config.particle_id[a] < config.particle_id[b];
    });

    const TwoTypeConfiguration& ext = dom.exterior;
    (void)dd;

    std::vector<Correction> pairs;
    for (std::size_t a = 0; a < ns; ++a)
        for (std::size_t b = a + 1; b < ns; ++b) {
            std::size_t i = s_order[a], j = s_order[b];
            double* xi = config.sphere(i).data();
            double* xj = config.sphere(j).data();
            pairs.push_back({xi, xj, xj, 0.5, ss, 1.0 / (2.0 * ss),
                             make_pair_key('S', config.sphere_id[i], 'S', config.sphere_id[j])});
        }
    for (std::size_t a = 0; a < ns; ++a)
        for (std::size_t b = 0; b < np; ++b) {
            std::size_t i = s_order[a], k = p_order[b];
            double* xi = config.sphere(i).data();
            double* xk = config.particle(k).data();
            pairs.push_back({xi, xk, xk, w_sphere, sp, 1.0 / ((1.0 + s2) * sp),
                             make_pair_key('S', config.sphere_id[i], 'P',
                                           config.particle_id[k])});
        }
    // frozen exterior obstacles: the mobile end takes the whole correction
    for (std::size_t a = 0; a < ns; ++a) {
        std::size_t i = s_order[a];
        for (std::size_t j = 0; j < ext.sphere_count(); ++j)
            pairs.push_back({config.sphere(i).data(), ext.sphere(j).data(), nullptr, 1.0, ss,
                             1.0 / ss,
                             make_pair_key('S', config.sphere_id[i], 'S', ext.sphere_id[j])});
        for (std::size_t k = 0; k < ext.particle_count(); ++k)
            pairs.push_back({config.sphere(i).data(), ext.particle(k).data(), nullptr, 1.0, sp,
                             1.0 / sp,
                             make_pair_key('S', config.sphere_id[i], 'P', ext.particle_id[k])});
    }
    for (std::size_t b = 0; b < np; ++b) {
        std::size_t k = p_order[b];
        for (std::size_t j = 0; j < ext.sphere_count(); ++j)
            pairs.push_back({config.particle(k).data(), ext.sphere(j).data(), nullptr, 1.0, sp,
                             1.0 / (s2 * sp),
                             make_pair_key('S', ext.sphere_id[j], 'P', config.particle_id[k])});
    }

    if (pairs.empty()) return 0;

    for (int sweep = 1; sweep <= settings.max_projection_sweeps; ++sweep) {
        sweep_pairs(pairs, dom, ledger);
        if (worst_violation(pairs, dom) <= settings.projection_tolerance) return sweep;
    }
    return -1;
}

namespace {

void add_noise(std::vector<double>& coords, double scale, Rng& rng) {
    for (double& c : coords) c += scale * rng.normal();
}

}  // namespace

bool step_two_type(TwoTypeConfiguration& config, const SimulationDomain& dom,
                   const DynamicsSpec& spec, const IntegratorSettings& settings,
                   Rng& rng, LocalTimeLedger& ledger, int* sweeps_used) {
    double h = settings.time_step;
    double root_h = std::sqrt(h);
    double s2 = dom.sigma * dom.sigma;
    auto dd = static_cast<std::size_t>(config.d);

    // drift at the pre-move positions
    if (spec.model == DynamicsModel::penalised) {
        if (!spec.field) throw std::invalid_argument("dynamics: penalised model needs a field");
        std::vector<double> drift_s(config.sphere_x.size(), 0.0);
        std::vector<double> drift_p(config.particle_x.size(), 0.0);
        for (std::size_t i = 0; i < config.sphere_count(); ++i) {
            auto fv = psi_and_grad(config.sphere(i), PointType::sphere, *spec.field);
            for (std::size_t k = 0; k < dd; ++k) drift_s[i * dd + k] = -0.5 * h * fv.gradient[k];
        }
        for (std::size_t p = 0; p < config.particle_count(); ++p) {
            auto fv = psi_and_grad(config.particle(p), PointType::particle, *spec.field);
            for (std::size_t k = 0; k < dd; ++k)
                drift_p[p * dd + k] = -0.5 * h * s2 * fv.gradient[k];
        }
        for (std::size_t i = 0; i < config.sphere_x.size(); ++i)
            config.sphere_x[i] += drift_s[i];
        for (std::size_t i = 0; i < config.particle_x.size(); ++i)
            config.particle_x[i] += drift_p[i];
    } else if (spec.model == DynamicsModel::depletion) {
        if (!spec.depletion)
            throw std::invalid_argument("dynamics: depletion model needs parameters");
        if (config.particle_count() > 0)
            throw std::invalid_argument(
                "dynamics: the depletion model integrates the small type out; no mobile "
                "particles allowed");
        auto grad = grad_energy(config.sphere_x, dom, *spec.depletion);
        double z = spec.depletion->activity;
        for (std::size_t i = 0; i < config.sphere_x.size(); ++i)
            config.sphere_x[i] -= 0.5 * h * z * grad[i];
    }

    if (!settings.zero_noise) {
        add_noise(config.sphere_x, root_h, rng);
        add_noise(config.particle_x, dom.sigma * root_h, rng);
    }
    wrap_into_box(config.sphere_x, dom);
    wrap_into_box(config.particle_x, dom);

    int sweeps = resolve_overlaps(config, dom, settings, &ledger);
    if (sweeps_used) *sweeps_used = sweeps;
    return sweeps >= 0;
}

bool step_depletion(std::vector<double>& sphere_centres, const SimulationDomain& dom,
                    const DepletionParams& p, const IntegratorSettings& settings,
                    Rng& rng, LocalTimeLedger& ledger,
                    const std::vector<std::int64_t>& ids) {
    TwoTypeConfiguration config;
    config.d = dom.d;
    config.sphere_x = std::move(sphere_centres);
    config.sphere_id = ids;
    DynamicsSpec spec;
    spec.model = DynamicsModel::depletion;
    spec.depletion = p;
    bool ok = step_two_type(config, dom, spec, settings, rng, ledger);
    sphere_centres = std::move(config.sphere_x);
    return ok;
}

TrajectoryRecord run(const TwoTypeConfiguration& initial, const SimulationDomain& dom,
                     const DynamicsSpec& spec, const IntegratorSettings& settings,
                     double horizon, std::int64_t sample_every, Rng& rng) {
    settings.validate();
    if (horizon < 0.0) throw std::invalid_argument("dynamics: horizon must be non-negative");
    if (sample_every < 1) throw std::invalid_argument("dynamics: sample_every must be >= 1");

    TrajectoryRecord record;
    TwoTypeConfiguration config = initial;
    double h = settings.time_step;
    auto steps = static_cast<std::int64_t>(std::floor(horizon / h + 1e-9));
    record.samples.push_back({0.0, config});

    for (std::int64_t s = 1; s <= steps; ++s) {
        int sweeps = 0;
        bool ok = step_two_type(config, dom, spec, settings, rng, record.ledger, &sweeps);
        ++record.steps_taken;
        record.total_projection_sweeps += std::max(sweeps, 0);
        record.max_sweeps_used = std::max(record.max_sweeps_used, sweeps);
        if (!ok) throw std::runtime_error("dynamics: projection failed to converge");
        if (s % sample_every == 0)
            record.samples.push_back({static_cast<double>(s) * h, config});
    }
    return record;
}

}  // namespace colloid
