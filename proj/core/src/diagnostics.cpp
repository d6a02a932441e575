#include "colloid/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "colloid/stats.hpp"

namespace colloid {

namespace {

std::vector<std::vector<std::size_t>> sphere_adjacency(
        const TwoTypeConfiguration& config, const SimulationDomain& dom,
        double threshold) {
    std::size_t n = config.sphere_count();
    std::vector<std::vector<std::size_t>> adj(n);
    double t2 = threshold * threshold;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dom.distance2(config.sphere(i), config.sphere(j)) < t2) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    }
    return adj;
}

bool extend_chain(const std::vector<std::vector<std::size_t>>& adj,
                  std::vector<std::size_t>& path, std::vector<char>& on_path,
                  std::size_t want) {
    if (path.size() == want) return true;
    for (std::size_t next : adj[path.back()]) {
        if (on_path[next]) continue;
        path.push_back(next);
        on_path[next] = 1;
        if (extend_chain(adj, path, on_path, want)) return true;
        on_path[next] = 0;
        path.pop_back();
    }
    return false;
}

struct IndexDeque {
    std::vector<std::size_t> v;
    std::size_t head = 0;

    bool empty() const { return head == v.size(); }
    std::size_t front() const { return v[head]; }
    std::size_t back() const { return v.back(); }
    void push_back(std::size_t i) { v.push_back(i); }
    void pop_back() { v.pop_back(); }
    void pop_front() { ++head; }
    void clear() {
        v.clear();
        head = 0;
    }
};

struct Burst {
    std::size_t a = 0;
    std::size_t b = 0;
};

// Looks for two samples at most max_lag grid steps apart whose positions
// differ by more than eps. Per-axis sliding extrema give an upper bound on
// any in-window displacement, so most windows are skipped; a window is only
// scanned (against its last sample) when the bound exceeds eps. Every close
// pair lies in the window ending at its later sample, so this is exhaustive.
std::optional<Burst> find_burst(const double* series, std::size_t count, int d,
                                std::size_t max_lag, double eps) {
    if (max_lag == 0 || count < 2) return std::nullopt;
    double eps2 = eps * eps;
    std::vector<IndexDeque> lo(d), hi(d);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t window_start = i > max_lag ? i - max_lag : 0;
        double u2 = 0.0;
        for (int k = 0; k < d; ++k) {
            double x = series[i * d + k];
            while (!hi[k].empty() && hi[k].front() < window_start) hi[k].pop_front();
            while (!lo[k].empty() && lo[k].front() < window_start) lo[k].pop_front();
            while (!hi[k].empty() && series[hi[k].back() * d + k] <= x) hi[k].pop_back();
            while (!lo[k].empty() && series[lo[k].back() * d + k] >= x) lo[k].pop_back();
            hi[k].push_back(i);
            lo[k].push_back(i);
            double osc = series[hi[k].front() * d + k] - series[lo[k].front() * d + k];
            u2 += osc * osc;
        }
        if (u2 > eps2) {
            for (std::size_t j = i; j-- > window_start;) {
                double d2 = 0.0;
                for (int k = 0; k < d; ++k) {
                    double diff = series[i * d + k] - series[j * d + k];
                    d2 += diff * diff;
                }
                if (d2 > eps2) return Burst{j, i};
            }
        }
    }
    return std::nullopt;
}

// uniform sample spacing, validated
double sample_spacing(const TrajectoryRecord& traj) {
    const auto& s = traj.samples;
    if (s.size() < 2) throw std::invalid_argument("need at least two samples");
    double g = s[1].time - s[0].time;
    if (!(g > 0.0)) throw std::invalid_argument("sample times must increase");
    for (std::size_t t = 1; t < s.size(); ++t) {
        double gap = s[t].time - s[t - 1].time;
        if (std::fabs(gap - g) > 1e-6 * g)
            throw std::invalid_argument("uniform sample spacing required");
    }
    return g;
}

void check_stable_identities(const TrajectoryRecord& traj) {
    const auto& first = traj.samples.front().config;
    for (const auto& sample : traj.samples) {
        const auto& c = sample.config;
        if (c.d != first.d || c.sphere_id != first.sphere_id ||
            c.particle_id != first.particle_id)
            throw std::invalid_argument("point identities must be stable across samples");
    }
}

std::vector<char> influence_spheres(const TwoTypeConfiguration& config,
                                    const SimulationDomain& dom, double rho,
                                    double link) {
    std::size_t n = config.sphere_count();
    std::vector<char> in(n, 0);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < n; ++i) {
        if (norm(config.sphere(i)) <= rho) {
            in[i] = 1;
            stack.push_back(i);
        }
    }
    auto adj = sphere_adjacency(config, dom, link);
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t j : adj[i]) {
            if (!in[j]) {
                in[j] = 1;
                stack.push_back(j);
            }
        }
    }
    return in;
}

std::vector<char> influence_particles(const TwoTypeConfiguration& config,
                                      const SimulationDomain& dom, double rho,
                                      double reach, const std::vector<char>& in_sphere) {
    std::size_t m = config.particle_count();
    std::vector<char> in(m, 0);
    for (std::size_t k = 0; k < m; ++k) {
        if (norm(config.particle(k)) < rho) {
            in[k] = 1;
            continue;
        }
        for (std::size_t i = 0; i < config.sphere_count(); ++i) {
            if (in_sphere[i] &&
                dom.distance(config.particle(k), config.sphere(i)) <= reach) {
                in[k] = 1;
                break;
            }
        }
    }
    return in;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    std::vector<std::size_t> size;
    std::size_t merges = 0;

    explicit UnionFind(std::size_t n) : parent(n), size(n, 1) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
        ++merges;
    }
};

}  // namespace

std::optional<ChainWitness> detect_chain(const TwoTypeConfiguration& config,
                                         const SimulationDomain& dom,
                                         double alpha, int kappa, double eps) {
    if (kappa < 1) throw std::invalid_argument("chain detection needs kappa >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("chain detection needs eps > 0");
    std::size_t want = static_cast<std::size_t>(kappa) + 1;
    std::size_t n = config.sphere_count();
    if (n < want) return std::nullopt;
    auto adj = sphere_adjacency(config, dom, 2.0 * dom.r_sphere + eps);
    std::vector<char> on_path(n, 0);
    std::vector<std::size_t> path;
    for (std::size_t root = 0; root < n; ++root) {
        if (norm(config.sphere(root)) > alpha) continue;
        path.assign(1, root);
        std::fill(on_path.begin(), on_path.end(), 0);
        on_path[root] = 1;
        if (extend_chain(adj, path, on_path, want)) return ChainWitness{path};
    }
    return std::nullopt;
}

std::optional<FastWitness> detect_fast(const TrajectoryRecord& traj,
                                       double alpha, double delta, double eps) {
    if (!(delta > 0.0) || !(eps > 0.0))
        throw std::invalid_argument("fast detection needs delta > 0 and eps > 0");
    if (traj.samples.size() < 2) return std::nullopt;
    double g = sample_spacing(traj);
    check_stable_identities(traj);
    double q = delta / g;
    double m = std::ceil(q - 1e-9) - 1.0;
    if (m < 1.0) return std::nullopt;
    std::size_t max_lag = static_cast<std::size_t>(m);
    const auto& first = traj.samples.front().config;
    int d = first.d;
    std::size_t count = traj.samples.size();
    std::vector<double> series(count * static_cast<std::size_t>(d));

    auto scan = [&](char type, std::size_t points) -> std::optional<FastWitness> {
        for (std::size_t p = 0; p < points; ++p) {
            double best_norm = std::numeric_limits<double>::infinity();
            std::size_t best_t = 0;
            for (std::size_t t = 0; t < count; ++t) {
                ConstSpan x = type == 'S' ? traj.samples[t].config.sphere(p)
                                          : traj.samples[t].config.particle(p);
                std::copy(x.begin(), x.end(), series.begin() + t * d);
                double r = norm(x);
                if (r < best_norm) {
                    best_norm = r;
                    best_t = t;
                }
            }
            if (best_norm > alpha) continue;
            auto burst = find_burst(series.data(), count, d, max_lag, eps);
            if (burst) {
                return FastWitness{p, type, traj.samples[best_t].time,
                                   traj.samples[burst->a].time,
                                   traj.samples[burst->b].time};
            }
        }
        return std::nullopt;
    };

    if (auto w = scan('S', first.sphere_count())) return w;
    return scan('P', first.particle_count());
}

BadPathSchedule BadPathSchedule::for_radius(double R, double r_sphere, double eps,
                                            double rho) {
    if (!(R >= 8.0)) throw std::invalid_argument("schedule needs R >= 8");
    if (!(r_sphere > 0.0) || !(eps > 0.0) || !(rho > 0.0))
        throw std::invalid_argument("schedule needs positive r_sphere, eps, rho");
    int k = static_cast<int>(std::floor(std::cbrt(R) + 1e-9));
    BadPathSchedule s;
    s.alpha = R - 2.0 * r_sphere;
    s.delta = 1.0 / k;
    s.kappa = k;
    s.eps = eps;
    s.rho = rho;
    return s;
}

SeparationReport verify_separation(const TrajectoryRecord& traj,
                                   const SimulationDomain& dom,
                                   const BadPathSchedule& sched) {
    if (sched.kappa < 1 || !(sched.delta > 0.0) || !(sched.eps > 0.0) ||
        !(sched.rho > 0.0))
        throw std::invalid_argument("schedule needs kappa >= 1, delta, eps, rho > 0");
    double g = sample_spacing(traj);
    check_stable_identities(traj);

    double t_end = traj.samples.back().time;
    auto windows = static_cast<std::int64_t>(std::llround(t_end / sched.delta));
    if (windows < 1 ||
        std::fabs(static_cast<double>(windows) * sched.delta - t_end) >
            1e-6 * std::max(1.0, t_end))
        throw std::invalid_argument("horizon must be a whole number of delta windows");

    std::size_t count = traj.samples.size();
    auto grid_index = [&](std::int64_t a) {
        double target = static_cast<double>(a) * sched.delta;
        auto s = static_cast<std::int64_t>(std::llround(target / g));
        if (s < 0 || s >= static_cast<std::int64_t>(count) ||
            std::fabs(static_cast<double>(s) * g - target) > 1e-6 * std::max(1.0, g))
            throw std::invalid_argument("delta grid times must coincide with sample times");
        return static_cast<std::size_t>(s);
    };

    double two_r_eps = 2.0 * dom.r_sphere + sched.eps;
    double reach = dom.r_sum() + sched.eps;
    double kd = static_cast<double>(sched.kappa);

    SeparationReport rep;
    rep.rho_zero = sched.rho + 2.0 * static_cast<double>(windows) * kd * two_r_eps;

    bool ok = rep.rho_zero <= sched.alpha;
    for (std::int64_t a = 0; ok && a <= windows; ++a) {
        if (detect_chain(traj.samples[grid_index(a)].config, dom, sched.alpha,
                         sched.kappa, sched.eps))
            ok = false;
    }
    if (ok && detect_fast(traj, sched.alpha, sched.delta, sched.eps / 4.0)) ok = false;
    rep.applicable = ok;
    if (!ok) return rep;

    auto rho_at = [&](std::int64_t a) {
        return sched.rho + 2.0 * static_cast<double>(windows - a) * kd * two_r_eps;
    };

    std::vector<std::vector<char>> in_s(windows), in_p(windows);
    for (std::int64_t a = 0; a < windows; ++a) {
        const auto& c = traj.samples[grid_index(a)].config;
        in_s[a] = influence_spheres(c, dom, rho_at(a), two_r_eps);
        in_p[a] = influence_particles(c, dom, rho_at(a), reach, in_s[a]);
    }

    double worst_s = std::numeric_limits<double>::infinity();
    double worst_p = std::numeric_limits<double>::infinity();
    double excursion = -std::numeric_limits<double>::infinity();
    bool any_inner = false;
    double sep_s = 2.0 * dom.r_sphere + sched.eps / 2.0;
    double sep_p = dom.r_sum() + sched.eps / 2.0;

    for (std::int64_t a = 0; a < windows; ++a) {
        std::size_t s_lo = grid_index(a);
        std::size_t s_hi = grid_index(a + 1);
        double allowed_s = rho_at(a) + kd * two_r_eps + sched.eps / 4.0;
        double allowed_p = rho_at(a) + kd * two_r_eps + dom.r_sum() + 1.25 * sched.eps;
        for (std::size_t s = s_lo; s <= s_hi; ++s) {
            const auto& c = traj.samples[s].config;
            for (std::size_t i = 0; i < c.sphere_count(); ++i) {
                if (!in_s[a][i]) continue;
                any_inner = true;
                excursion = std::max(excursion, norm(c.sphere(i)) - allowed_s);
                for (std::size_t j = 0; j < c.sphere_count(); ++j) {
                    if (in_s[a][j]) continue;
                    worst_s = std::min(
                        worst_s, dom.distance(c.sphere(j), c.sphere(i)) - sep_s);
                }
                for (std::size_t k = 0; k < c.particle_count(); ++k) {
                    if (in_p[a][k]) continue;
                    worst_p = std::min(
                        worst_p, dom.distance(c.particle(k), c.sphere(i)) - sep_p);
                }
            }
            for (std::size_t k = 0; k < c.particle_count(); ++k) {
                if (!in_p[a][k]) continue;
                any_inner = true;
                excursion = std::max(excursion, norm(c.particle(k)) - allowed_p);
            }
        }
    }

    for (std::int64_t a = 0; a + 1 < windows && rep.nested; ++a) {
        for (std::size_t i = 0; i < in_s[a].size(); ++i) {
            if (in_s[a + 1][i] && !in_s[a][i]) rep.nested = false;
        }
        for (std::size_t k = 0; k < in_p[a].size(); ++k) {
            if (in_p[a + 1][k] && !in_p[a][k]) rep.nested = false;
        }
    }

    rep.worst_sphere_margin = worst_s;
    rep.worst_particle_margin = worst_p;
    rep.max_inner_excursion = any_inner ? excursion : 0.0;
    rep.separated = worst_s > 0.0 && worst_p > 0.0;
    rep.localised = rep.max_inner_excursion <= 0.0;
    return rep;
}

ClusterDecomposition percolation_clusters(const std::vector<double>& sphere_centres,
                                          const SimulationDomain& dom,
                                          double link_radius) {
    auto d = static_cast<std::size_t>(dom.d);
    if (dom.d <= 0 || sphere_centres.size() % d != 0)
        throw std::invalid_argument("centre array must hold d coordinates per point");
    double r_link = link_radius > 0.0 ? link_radius : 2.0 * dom.r_sum();
    std::size_t n = sphere_centres.size() / d;

    ClusterDecomposition out;
    if (n == 0) return out;

    UnionFind uf(n);
    if (n > 1) {
        NeighborGrid grid(dom, r_link, ConstSpan(sphere_centres), dom.d);
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        grid.pairs(pairs);
        for (const auto& [i, j] : pairs) uf.unite(i, j);
    }

    std::vector<std::vector<std::size_t>> buckets(n);
    for (std::size_t i = 0; i < n; ++i) buckets[uf.find(i)].push_back(i);
    for (auto& bucket : buckets) {
        if (!bucket.empty()) out.clusters.push_back(std::move(bucket));
    }
    std::sort(out.clusters.begin(), out.clusters.end(),
              [](const auto& a, const auto& b) {
                  if (a.size() != b.size()) return a.size() > b.size();
                  return a.front() < b.front();
              });
    out.largest = out.clusters.front().size();
    out.merges = uf.merges;
    return out;
}

bool cluster_spans_axis(const std::vector<double>& sphere_centres,
                        const std::vector<std::size_t>& cluster,
                        const SimulationDomain& dom, double link_radius, int axis) {
    if (dom.container != ContainerKind::periodic_box)
        throw std::invalid_argument("spanning check needs a box container");
    if (axis < 0 || axis >= dom.d) throw std::invalid_argument("axis out of range");
    double r_link = link_radius > 0.0 ? link_radius : 2.0 * dom.r_sum();
    double side = dom.box_sides[static_cast<std::size_t>(axis)];
    auto d = static_cast<std::size_t>(dom.d);
    bool low = false, high = false;
    for (std::size_t idx : cluster) {
        double x = sphere_centres[idx * d + static_cast<std::size_t>(axis)];
        low = low || x <= r_link;
        high = high || x >= side - r_link;
    }
    return low && high;
}

double chain_bound_value(double z_sphere, int d, double r_sphere, double eps,
                         int kappa) {
    if (d < 1 || kappa < 1 || !(r_sphere > 0.0) || !(eps > 0.0) || !(z_sphere >= 0.0))
        throw std::invalid_argument("chain bound needs d, kappa >= 1 and positive radii");
    double shell = (std::pow(2.0 * r_sphere + eps, d) - std::pow(2.0 * r_sphere, d)) *
                   unit_ball_volume(d);
    return std::pow(z_sphere * shell, kappa);
}

ChainBoundResult verify_chain_bound(const GibbsModelParams& params,
                                    const BadPathSchedule& schedule,
                                    std::int64_t replicas, Rng& rng, double z,
                                    std::int64_t burn_in, std::int64_t thin) {
    params.validate();
    if (replicas <= 0 || thin <= 0 || burn_in < 0)
        throw std::invalid_argument("need replicas, thin > 0 and burn_in >= 0");

    McmcSettings settings;
    SamplerState state;
    state.config.d = params.domain.d;
    for (std::int64_t i = 0; i < burn_in; ++i) mcmc_step(state, params, settings, rng);

    ChainBoundResult res;
    res.replicas = replicas;
    for (std::int64_t r = 0; r < replicas; ++r) {
        for (std::int64_t i = 0; i < thin; ++i) mcmc_step(state, params, settings, rng);
        if (detect_chain(state.config, params.domain, schedule.alpha, schedule.kappa,
                         schedule.eps))
            ++res.hits;
    }
    res.frequency = static_cast<double>(res.hits) / static_cast<double>(replicas);
    Interval w = wilson_interval(res.hits, replicas, z);
    res.upper_confidence = w.hi;
    res.bound = chain_bound_value(params.z_sphere, params.domain.d,
                                  params.domain.r_sphere, schedule.eps, schedule.kappa);
    res.satisfied = w.lo <= res.bound;
    return res;
}

double fast_bound_value(int d, double delta, double eps) {
    if (d < 1 || !(delta > 0.0) || !(eps > 0.0))
        throw std::invalid_argument("oscillation bound needs d >= 1, delta, eps > 0");
    return 4.0 * std::sqrt(5.0) * (static_cast<double>(d) / delta) *
           std::exp(-eps * eps / (10.0 * static_cast<double>(d) * delta));
}

FastBoundResult verify_fast_bound(int d, double delta, double eps,
                                  std::int64_t replicas, Rng& rng, double horizon,
                                  int grid_per_delta, double z) {
    if (d < 1 || !(delta > 0.0) || !(eps > 0.0) || replicas <= 0 ||
        grid_per_delta < 2 || !(horizon >= delta))
        throw std::invalid_argument("oscillation check needs d >= 1, positive scales, "
                                    "grid_per_delta >= 2, horizon >= delta");
    double g = delta / grid_per_delta;
    auto steps = static_cast<std::size_t>(std::llround(horizon / g));
    std::size_t count = steps + 1;
    auto max_lag = static_cast<std::size_t>(grid_per_delta - 1);
    double sqrt_g = std::sqrt(g);
    std::vector<double> series(count * static_cast<std::size_t>(d));

    FastBoundResult res;
    res.replicas = replicas;
    for (std::int64_t r = 0; r < replicas; ++r) {
        for (int k = 0; k < d; ++k) series[static_cast<std::size_t>(k)] = 0.0;
        for (std::size_t t = 1; t < count; ++t) {
            for (int k = 0; k < d; ++k) {
                series[t * d + k] = series[(t - 1) * d + k] + sqrt_g * rng.normal();
            }
        }
        if (find_burst(series.data(), count, d, max_lag, eps)) ++res.hits;
    }
    res.frequency = static_cast<double>(res.hits) / static_cast<double>(replicas);
    Interval w = wilson_interval(res.hits, replicas, z);
    res.upper_confidence = w.hi;
    res.bound = fast_bound_value(d, delta, eps);
    res.vacuous = res.bound > 1.0;
    res.satisfied = w.lo <= res.bound;
    return res;
}

std::vector<PackingCurve> packing_experiment(const std::vector<double>& z_ladder,
                                             const std::vector<double>& z_particles,
                                             const SimulationDomain& box,
                                             std::int64_t proposals_per_point,
                                             int chains, Rng& rng) {
    if (box.container != ContainerKind::periodic_box)
        throw std::invalid_argument("packing runs in a periodic box");
    if (chains < 2) throw std::invalid_argument("need at least two chains");
    if (proposals_per_point < 2) throw std::invalid_argument("need proposals per point");
    box.validate();

    double volume = 1.0;
    for (double side : box.box_sides) volume *= side;

    McmcSettings settings;
    std::vector<PackingCurve> curves;
    for (double zp : z_particles) {
        PackingCurve curve;
        curve.z_particle = zp;
        // each chain anneals up the activity ladder, keeping its state
        std::vector<SamplerState> states(chains);
        std::vector<Rng> chain_rngs;
        chain_rngs.reserve(chains);
        for (int c = 0; c < chains; ++c) {
            states[c].config.d = box.d;
            chain_rngs.emplace_back(rng.next_u64());
        }
        for (double zs : z_ladder) {
            GibbsModelParams params;
            params.model = GibbsModel::one_type_depletion;
            params.domain = box;
            params.z_sphere = zs;
            params.z_particle = zp;
            params.validate();

            std::int64_t burn = proposals_per_point / 2;
            std::int64_t measure = proposals_per_point - burn;
            MeanAccumulator across;
            double acceptance_sum = 0.0;
            for (int c = 0; c < chains; ++c) {
                auto& st = states[c];
                auto& crng = chain_rngs[c];
                std::int64_t acc0 =
                    st.accepted_birth + st.accepted_death + st.accepted_translate;
                std::int64_t prop0 = st.proposals;
                for (std::int64_t i = 0; i < burn; ++i)
                    mcmc_step(st, params, settings, crng);
                MeanAccumulator density;
                for (std::int64_t i = 0; i < measure; ++i) {
                    mcmc_step(st, params, settings, crng);
                    if ((i + 1) % 100 == 0)
                        density.add(static_cast<double>(st.config.sphere_count()) / volume);
                }
                if (density.n == 0)
                    density.add(static_cast<double>(st.config.sphere_count()) / volume);
                across.add(density.mean);
                std::int64_t acc1 =
                    st.accepted_birth + st.accepted_death + st.accepted_translate;
                acceptance_sum += static_cast<double>(acc1 - acc0) /
                                  static_cast<double>(st.proposals - prop0);
            }
            PackingPoint point;
            point.z_sphere = zs;
            point.mean_density = across.mean;
            point.density_se = across.std_error();
            point.acceptance = acceptance_sum / chains;
            curve.points.push_back(point);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

}  // namespace colloid
