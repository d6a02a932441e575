#include "colloid/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "colloid/stats.hpp"

namespace colloid {

DepletionParams GibbsModelParams::depletion_params() const {
    DepletionParams p;
    p.d = domain.d;
    p.r_sphere = domain.r_sphere;
    p.r_particle = domain.r_particle;
    p.activity = z_particle;
    return p;
}

void GibbsModelParams::validate() const {
    domain.validate();
    if (z_sphere < 0.0 || z_particle < 0.0)
        throw std::invalid_argument("gibbs: activities must be non-negative");
    switch (model) {
        case GibbsModel::two_type_hard_core:
        case GibbsModel::one_type_depletion:
            if (domain.container == ContainerKind::none)
                throw std::invalid_argument("gibbs: window samplers need a bounded container");
            break;
        case GibbsModel::penalised:
            if (!field) throw std::invalid_argument("gibbs: penalised model needs a field");
            field->validate();
            if (domain.container != ContainerKind::none)
                throw std::invalid_argument(
                    "gibbs: the penalised model confines softly; leave the container unset");
            break;
    }
    if (model == GibbsModel::one_type_depletion && !depletion_params().pairwise_regime())
        throw std::invalid_argument(
            "gibbs: one-type sampling uses the pairwise energy, exact only for "
            "r_particle/r_sphere <= 2/sqrt(3)-1");
}

namespace {

double window_volume(const GibbsModelParams& params) {
    const auto& dom = params.domain;
    if (dom.container == ContainerKind::ball)
        return unit_ball_volume(dom.d) * std::pow(dom.ball_radius, dom.d);
    if (dom.container == ContainerKind::periodic_box) {
        double v = 1.0;
        for (double s : dom.box_sides) v *= s;
        return v;
    }
    // penalised: the proposal ball, truncated where the wall ramp has
    // suppressed the density below e^{-39} of its in-region level
    double R = params.field->R;
    double rp = R + 40.0 * std::pow(R, -(params.domain.d + 1));
    return unit_ball_volume(dom.d) * std::pow(rp, dom.d);
}

double proposal_radius(const GibbsModelParams& params) {
    if (params.domain.container == ContainerKind::ball) return params.domain.ball_radius;
    double R = params.field->R;
    return R + 40.0 * std::pow(R, -(params.domain.d + 1));
}

void draw_position(const GibbsModelParams& params, Rng& rng, std::vector<double>& x) {
    const auto& dom = params.domain;
    auto dd = static_cast<std::size_t>(dom.d);
    x.resize(dd);
    if (dom.container == ContainerKind::periodic_box) {
        for (std::size_t k = 0; k < dd; ++k) x[k] = rng.uniform(0.0, dom.box_sides[k]);
        return;
    }
    double R = proposal_radius(params);
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (std::size_t k = 0; k < dd; ++k) {
            x[k] = rng.normal();
            n2 += x[k] * x[k];
        }
    } while (n2 == 0.0);
    double radius = R * std::pow(rng.uniform_open(), 1.0 / static_cast<double>(dom.d));
    double scale = radius / std::sqrt(n2);
    for (std::size_t k = 0; k < dd; ++k) x[k] *= scale;
}

bool inside_window(const GibbsModelParams& params, ConstSpan x) {
    const auto& dom = params.domain;
    if (dom.container == ContainerKind::periodic_box) return true;  // wrapped
    double R = proposal_radius(params);
    return dot(x, x) <= R * R;
}

// Hard-core feasibility of placing/moving one point, against every relevant
// neighbour. skip_* marks the moving point itself.
bool placement_ok(const GibbsModelParams& params, const TwoTypeConfiguration& config,
                  ConstSpan x, char type, std::size_t skip_index, bool skip_is_sphere) {
    const auto& dom = params.domain;
    double ss = 2.0 * dom.r_sphere;
    double sp = dom.r_sum();
    bool vs_exterior = params.model != GibbsModel::penalised;

    if (type == 'S') {
        for (std::size_t j = 0; j < config.sphere_count(); ++j) {
            if (skip_is_sphere && j == skip_index) continue;
            if (dom.distance2(x, config.sphere(j)) < ss * ss) return false;
        }
        for (std::size_t k = 0; k < config.particle_count(); ++k) {
            if (!skip_is_sphere && k == skip_index) continue;
            if (dom.distance2(x, config.particle(k)) < sp * sp) return false;
        }
        if (vs_exterior) {
            const auto& ext = dom.exterior;
            for (std::size_t j = 0; j < ext.sphere_count(); ++j)
                if (dom.distance2(x, ext.sphere(j)) < ss * ss) return false;
            for (std::size_t k = 0; k < ext.particle_count(); ++k)
                if (dom.distance2(x, ext.particle(k)) < sp * sp) return false;
        }
    } else {
        for (std::size_t j = 0; j < config.sphere_count(); ++j) {
            if (skip_is_sphere && j == skip_index) continue;
            if (dom.distance2(x, config.sphere(j)) < sp * sp) return false;
        }
        if (vs_exterior) {
            const auto& ext = dom.exterior;
            for (std::size_t j = 0; j < ext.sphere_count(); ++j)
                if (dom.distance2(x, ext.sphere(j)) < sp * sp) return false;
        }
    }
    return true;
}

// Depletion-energy contribution of a sphere at x against the others.
double point_energy(const GibbsModelParams& params, const TwoTypeConfiguration& config,
                    ConstSpan x, std::size_t skip_index, bool has_skip,
                    const DepletionParams& dp) {
    const auto& dom = params.domain;
    double r = dp.r_sum();
    double reach2 = 4.0 * r * r;
    double e = unit_ball_volume(dp.d) * std::pow(r, dp.d);
    for (std::size_t j = 0; j < config.sphere_count(); ++j) {
        if (has_skip && j == skip_index) continue;
        double d2 = dom.distance2(x, config.sphere(j));
        if (d2 < reach2) e -= v_ovlap(std::sqrt(d2) / (2.0 * r), dp);
    }
    return e;
}

double field_value(const GibbsModelParams& params, ConstSpan x, char type) {
    return psi_and_grad(x, type == 'S' ? PointType::sphere : PointType::particle,
                        *params.field)
        .value;
}

}  // namespace

bool mcmc_step(SamplerState& state, const GibbsModelParams& params,
               const McmcSettings& settings, Rng& rng) {
    const auto& dom = params.domain;
    auto& config = state.config;
    config.d = dom.d;
    ++state.proposals;

    DepletionParams dp = params.depletion_params();
    bool one_type = params.model == GibbsModel::one_type_depletion;
    bool penalised = params.model == GibbsModel::penalised;
    double volume = window_volume(params);

    if (one_type && settings.full_recompute_every > 0 &&
        state.proposals % settings.full_recompute_every == 0) {
        double fresh = energy(config.sphere_x, dom, dp);
        ++state.energy_rebuilds;
        if (std::abs(fresh - state.energy) >
            settings.energy_drift_tolerance * std::max(1.0, std::abs(fresh)))
            throw std::runtime_error("gibbs: cached energy drifted past tolerance");
        state.energy = fresh;
    }

    double u_move = rng.uniform();
    char type = 'S';
    if (!one_type && (params.z_particle > 0.0 || config.particle_count() > 0))
        type = rng.uniform() < 0.5 ? 'S' : 'P';
    double z = type == 'S' ? params.z_sphere : params.z_particle;

    std::vector<double> x;
    if (u_move < settings.p_birth) {
        draw_position(params, rng, x);
        ConstSpan xs(x.data(), x.size());
        auto n = static_cast<double>(type == 'S' ? config.sphere_count()
                                                 : config.particle_count());
        if (z <= 0.0) return false;
        if (!placement_ok(params, config, xs, type, config.sphere_count() + 1, true))
            return false;
        double log_weight = 0.0;
        double delta_e = 0.0;
        if (one_type) {
            delta_e = point_energy(params, config, xs, 0, false, dp);
            log_weight = -params.z_particle * delta_e;
        } else if (penalised) {
            log_weight = -field_value(params, xs, type);
        }
        double ratio = z * volume / (n + 1.0) * (settings.p_death / settings.p_birth) *
                       std::exp(log_weight);
        if (rng.uniform() >= std::min(1.0, ratio)) return false;
        if (type == 'S') {
            config.add_sphere(xs, config.next_sphere_id());
            if (one_type) state.energy += delta_e;
        } else {
            config.add_particle(xs, config.next_particle_id());
        }
        ++state.accepted_birth;
        return true;
    }

    if (u_move < settings.p_birth + settings.p_death) {
        std::size_t n = type == 'S' ? config.sphere_count() : config.particle_count();
        if (n == 0) return false;
        std::size_t pick = static_cast<std::size_t>(rng.below(n));
        ConstSpan xs = type == 'S' ? config.sphere(pick) : config.particle(pick);
        double log_weight = 0.0;
        double delta_e = 0.0;
        if (one_type) {
            delta_e = point_energy(params, config, xs, pick, true, dp);
            log_weight = params.z_particle * delta_e;
        } else if (penalised) {
            log_weight = field_value(params, xs, type);
        }
        double ratio;
        if (z <= 0.0) {
            ratio = 1.0;  // stray points under a zero activity always die
        } else {
            ratio = static_cast<double>(n) / (z * volume) *
                    (settings.p_birth / settings.p_death) * std::exp(log_weight);
        }
        if (rng.uniform() >= std::min(1.0, ratio)) return false;
        if (type == 'S') {
            config.remove_sphere(pick);
            if (one_type) state.energy -= delta_e;
        } else {
            config.remove_particle(pick);
        }
        ++state.accepted_death;
        return true;
    }

    std::size_t n = type == 'S' ? config.sphere_count() : config.particle_count();
    if (n == 0) return false;
    std::size_t pick = static_cast<std::size_t>(rng.below(n));
    Span old_x = type == 'S' ? config.sphere(pick) : config.particle(pick);
    auto dd = static_cast<std::size_t>(dom.d);
    std::vector<double> y(dd);
    double kick = settings.translate_scale * dom.r_sphere;
    for (std::size_t k = 0; k < dd; ++k) y[k] = old_x[k] + kick * rng.normal();
    if (dom.container == ContainerKind::periodic_box) {
        for (std::size_t k = 0; k < dd; ++k) {
            double side = dom.box_sides[k];
            y[k] = std::fmod(y[k], side);
            if (y[k] < 0.0) y[k] += side;
        }
    }
    ConstSpan ys(y.data(), dd);
    if (!inside_window(params, ys)) return false;
    if (!placement_ok(params, config, ys, type, pick, type == 'S')) return false;

    double log_ratio = 0.0;
    double e_old = 0.0, e_new = 0.0;
    if (one_type) {
        e_old = point_energy(params, config, ConstSpan(old_x.data(), dd), pick, true, dp);
        e_new = point_energy(params, config, ys, pick, true, dp);
        log_ratio = -params.z_particle * (e_new - e_old);
    } else if (penalised) {
        log_ratio = field_value(params, ConstSpan(old_x.data(), dd), type) -
                    field_value(params, ys, type);
    }
    if (log_ratio < 0.0 && rng.uniform() >= std::exp(log_ratio)) return false;
    for (std::size_t k = 0; k < dd; ++k) old_x[k] = y[k];
    if (one_type) state.energy += e_new - e_old;
    ++state.accepted_translate;
    return true;
}

std::vector<TwoTypeConfiguration> sample(const GibbsModelParams& params,
                                         const McmcSettings& settings,
                                         std::int64_t burn_in, std::int64_t thin,
                                         std::int64_t count, Rng& rng) {
    params.validate();
    if (thin < 1) throw std::invalid_argument("gibbs: thin must be >= 1");
    if (count < 0) throw std::invalid_argument("gibbs: count must be non-negative");

    SamplerState state;
    state.config.d = params.domain.d;
    for (std::int64_t i = 0; i < burn_in; ++i) mcmc_step(state, params, settings, rng);

    std::vector<TwoTypeConfiguration> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t c = 0; c < count; ++c) {
        for (std::int64_t i = 0; i < thin; ++i) mcmc_step(state, params, settings, rng);
        out.push_back(state.config);
    }
    return out;
}

namespace {

// Halton radical inverse in the given base, shifted mod 1.
double halton(std::int64_t index, int base, double shift) {
    double f = 1.0, r = 0.0;
    std::int64_t i = index;
    while (i > 0) {
        f /= base;
        r += f * (i % base);
        i /= base;
    }
    r += shift;
    return r - std::floor(r);
}

constexpr int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                          37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79};

}  // namespace

TinyPartitionResult exact_tiny_partition(const GibbsModelParams& params, int max_spheres,
                                         int max_particles, std::int64_t quad_samples) {
    params.validate();
    if (params.model != GibbsModel::two_type_hard_core)
        throw std::invalid_argument("tiny partition: supported for the two-type model only");
    if (max_spheres < 0 || max_spheres > 2 || max_particles < 0 || max_particles > 2)
        throw std::invalid_argument("tiny partition: caps must lie in [0, 2]");
    if (quad_samples < 16) throw std::invalid_argument("tiny partition: too few samples");

    const auto& dom = params.domain;
    auto dd = static_cast<std::size_t>(dom.d);
    bool ball = dom.container == ContainerKind::ball;
    double R = dom.ball_radius;

    // bounding box for the quasi-random points
    std::vector<double> lo(dd), hi(dd);
    double bb_volume = 1.0;
    for (std::size_t k = 0; k < dd; ++k) {
        lo[k] = ball ? -R : 0.0;
        hi[k] = ball ? R : dom.box_sides[k];
        bb_volume *= hi[k] - lo[k];
    }
    double window = window_volume(params);

    const int replicates = 16;
    std::int64_t per_rep = quad_samples / replicates;
    Rng shift_rng(0x9e3779b97f4a7c15ull);

    double ss = 2.0 * dom.r_sphere;
    double sp = dom.r_sum();

    // kept terms, n + m >= 1; integral estimates per replicate
    struct Term {
        int n, m;
        MeanAccumulator integral;  // over replicates
    };
    std::vector<Term> terms;
    for (int n = 0; n <= max_spheres; ++n)
        for (int m = 0; m <= max_particles; ++m)
            if (n + m > 0) terms.push_back({n, m, {}});

    std::vector<double> pt;
    std::vector<double> shift;
    for (auto& term : terms) {
        int points = term.n + term.m;
        auto dim = static_cast<std::size_t>(points) * dd;
        if (dim > sizeof(primes) / sizeof(primes[0]))
            throw std::invalid_argument("tiny partition: dimension too large for the bases");
        for (int rep = 0; rep < replicates; ++rep) {
            shift.assign(dim, 0.0);
            for (auto& s : shift) s = shift_rng.uniform();
            std::int64_t hits = 0;
            for (std::int64_t s = 0; s < per_rep; ++s) {
                pt.resize(dim);
                bool ok = true;
                for (std::size_t c = 0; c < dim && ok; ++c) {
                    double u = halton(s + 1, primes[c], shift[c]);
                    pt[c] = lo[c % dd] + u * (hi[c % dd] - lo[c % dd]);
                    if (ball && (c + 1) % dd == 0) {
                        double r2 = 0.0;
                        for (std::size_t k = c + 1 - dd; k <= c; ++k) r2 += pt[k] * pt[k];
                        if (r2 > R * R) ok = false;
                    }
                }
                if (!ok) continue;
                // pairwise constraints: spheres first, then particles
                for (int a = 0; a < points && ok; ++a)
                    for (int b = a + 1; b < points && ok; ++b) {
                        bool a_s = a < term.n;
                        bool b_s = b < term.n;
                        if (!a_s && !b_s) continue;
                        double threshold = a_s && b_s ? ss : sp;
                        double d2 = dom.distance2(
                            ConstSpan(pt.data() + static_cast<std::size_t>(a) * dd, dd),
                            ConstSpan(pt.data() + static_cast<std::size_t>(b) * dd, dd));
                        if (d2 < threshold * threshold) ok = false;
                    }
                if (ok) ++hits;
            }
            double bb_power = std::pow(bb_volume, points);
            term.integral.add(bb_power * static_cast<double>(hits) /
                              static_cast<double>(per_rep));
        }
    }

    TinyPartitionResult out;
    out.occupancy.assign(static_cast<std::size_t>(max_spheres) + 1,
                         std::vector<double>(static_cast<std::size_t>(max_particles) + 1, 0.0));
    double z_total = 1.0;  // empty term
    double var_total = 0.0;
    auto factorial = [](int k) { return k == 2 ? 2.0 : 1.0; };
    std::vector<double> weights(terms.size());
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const auto& term = terms[t];
        double coeff = std::pow(params.z_sphere, term.n) / factorial(term.n) *
                       std::pow(params.z_particle, term.m) / factorial(term.m);
        weights[t] = coeff * term.integral.mean;
        z_total += weights[t];
        double se = term.integral.std_error();
        var_total += coeff * coeff * se * se;
    }
    out.partition = z_total;
    out.std_error = std::sqrt(var_total);
    out.occupancy[0][0] = 1.0 / z_total;
    for (std::size_t t = 0; t < terms.size(); ++t)
        out.occupancy[static_cast<std::size_t>(terms[t].n)]
                     [static_cast<std::size_t>(terms[t].m)] = weights[t] / z_total;

    // upper bound on the discarded tail: sphere blocks beyond the cap are
    // bounded through the measured top integral, particle blocks through the
    // free window volume
    double a = params.z_sphere * window;
    double b = params.z_particle * window;
    auto partial_exp = [](double v, int cap) {
        double s = 0.0, term_v = 1.0;
        for (int k = 0; k <= cap; ++k) {
            s += term_v;
            term_v *= v / (k + 1);
        }
        return s;
    };
    double kept_sphere_mass = 1.0;  // sum over n <= cap of z^n/n! I_{n,0}
    double top_integral = window;   // I_{max_s,0} estimate, defaults for cap 0
    for (const auto& term : terms) {
        if (term.m != 0) continue;
        kept_sphere_mass +=
            std::pow(params.z_sphere, term.n) / factorial(term.n) * term.integral.mean;
        if (term.n == max_spheres) top_integral = term.integral.mean;
    }
    double sphere_tail = max_spheres > 0
                             ? top_integral / std::pow(window, max_spheres) *
                                   (std::exp(a) - partial_exp(a, max_spheres)) * std::exp(b)
                             : (std::exp(a) - 1.0) * std::exp(b);
    double particle_tail = kept_sphere_mass * (std::exp(b) - partial_exp(b, max_particles));
    out.truncation_remainder_bound = sphere_tail + particle_tail;
    return out;
}

TwoTypeConfiguration reconstruct_particles(const std::vector<double>& sphere_centres,
                                           const SimulationDomain& dom, double z_particle,
                                           Rng& rng) {
    TwoTypeConfiguration out;
    out.d = dom.d;
    auto dd = static_cast<std::size_t>(dom.d);
    double volume = 1.0;
    bool ball = dom.container == ContainerKind::ball;
    if (ball) {
        volume = unit_ball_volume(dom.d) * std::pow(dom.ball_radius, dom.d);
    } else if (dom.container == ContainerKind::periodic_box) {
        for (double s : dom.box_sides) volume *= s;
    } else {
        throw std::invalid_argument("reconstruction: needs a bounded window");
    }

    std::size_t n = sphere_centres.size() / dd;
    double r = dom.r_sum();
    double r2 = r * r;
    std::int64_t count = rng.poisson(z_particle * volume);
    std::vector<double> x(dd);
    std::int64_t id = 0;
    for (std::int64_t c = 0; c < count; ++c) {
        if (ball) {
            double n2 = 0.0;
            do {
                n2 = 0.0;
                for (std::size_t k = 0; k < dd; ++k) {
                    x[k] = rng.normal();
                    n2 += x[k] * x[k];
                }
            } while (n2 == 0.0);
            double radius =
                dom.ball_radius * std::pow(rng.uniform_open(), 1.0 / static_cast<double>(dom.d));
            double scale = radius / std::sqrt(n2);
            for (std::size_t k = 0; k < dd; ++k) x[k] *= scale;
        } else {
            for (std::size_t k = 0; k < dd; ++k) x[k] = rng.uniform(0.0, dom.box_sides[k]);
        }
        bool clear = true;
        for (std::size_t i = 0; i < n && clear; ++i)
            if (dom.distance2(ConstSpan(x.data(), dd),
                              ConstSpan(sphere_centres.data() + i * dd, dd)) < r2)
                clear = false;
        if (clear) out.add_particle(ConstSpan(x.data(), dd), id++);
    }
    return out;
}

namespace {

struct SeriesStats {
    double mean = 0.0;
    double se = 0.0;
};

// batch-means standard error, robust to leftover autocorrelation
SeriesStats batch_stats(const std::vector<double>& xs, int batches = 20) {
    SeriesStats s;
    if (xs.empty()) return s;
    MeanAccumulator all;
    for (double x : xs) all.add(x);
    s.mean = all.mean;
    auto b = static_cast<std::size_t>(batches);
    if (xs.size() < 2 * b) {
        s.se = all.std_error();
        return s;
    }
    std::size_t len = xs.size() / b;
    MeanAccumulator of_batches;
    for (std::size_t i = 0; i < b; ++i) {
        MeanAccumulator batch;
        for (std::size_t j = i * len; j < (i + 1) * len; ++j) batch.add(xs[j]);
        of_batches.add(batch.mean);
    }
    s.se = of_batches.std_error();
    return s;
}

}  // namespace

MarginalEquivalenceResult marginal_equivalence_experiment(
    const GibbsModelParams& params, const McmcSettings& settings, std::int64_t burn_in,
    std::int64_t thin, std::int64_t count, Rng& rng) {
    if (params.model != GibbsModel::two_type_hard_core)
        throw std::invalid_argument("equivalence: pass the two-type model parameters");
    params.validate();

    GibbsModelParams one = params;
    one.model = GibbsModel::one_type_depletion;
    one.validate();

    double cutoff = 2.0 * params.domain.r_sum();
    auto pair_count = [&](const TwoTypeConfiguration& c) {
        double s = 0.0;
        for (std::size_t i = 0; i < c.sphere_count(); ++i)
            for (std::size_t j = i + 1; j < c.sphere_count(); ++j)
                if (params.domain.distance2(c.sphere(i), c.sphere(j)) <= cutoff * cutoff)
                    s += 1.0;
        return s;
    };

    auto two_samples = sample(params, settings, burn_in, thin, count, rng);
    auto one_samples = sample(one, settings, burn_in, thin, count, rng);

    std::vector<double> two_counts, one_counts, two_pairs, one_pairs, two_particles,
        reconstructed;
    for (const auto& c : two_samples) {
        two_counts.push_back(static_cast<double>(c.sphere_count()));
        two_pairs.push_back(pair_count(c));
        two_particles.push_back(static_cast<double>(c.particle_count()));
    }
    for (const auto& c : one_samples) {
        one_counts.push_back(static_cast<double>(c.sphere_count()));
        one_pairs.push_back(pair_count(c));
        auto rec = reconstruct_particles(c.sphere_x, params.domain, params.z_particle, rng);
        reconstructed.push_back(static_cast<double>(rec.particle_count()));
    }

    MarginalEquivalenceResult r;
    auto tc = batch_stats(two_counts), oc = batch_stats(one_counts);
    auto tp = batch_stats(two_pairs), op = batch_stats(one_pairs);
    auto dp = batch_stats(two_particles), rp = batch_stats(reconstructed);
    r.two_type_mean_count = tc.mean;
    r.two_type_count_se = tc.se;
    r.one_type_mean_count = oc.mean;
    r.one_type_count_se = oc.se;
    r.two_type_mean_pair = tp.mean;
    r.two_type_pair_se = tp.se;
    r.one_type_mean_pair = op.mean;
    r.one_type_pair_se = op.se;
    r.count_z = two_mean_z(tc.mean, tc.se, oc.mean, oc.se);
    r.pair_z = two_mean_z(tp.mean, tp.se, op.mean, op.se);
    r.direct_particle_mean = dp.mean;
    r.direct_particle_se = dp.se;
    r.reconstructed_particle_mean = rp.mean;
    r.reconstructed_particle_se = rp.se;
    r.particle_z = two_mean_z(dp.mean, dp.se, rp.mean, rp.se);
    return r;
}

}  // namespace colloid
