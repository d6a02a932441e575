#include "colloid/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "colloid/depletion.hpp"
#include "colloid/rng.hpp"

namespace colloid {

void TwoTypeConfiguration::add_sphere(ConstSpan x, std::int64_t id) {
    sphere_x.insert(sphere_x.end(), x.begin(), x.end());
    sphere_id.push_back(id);
}

void TwoTypeConfiguration::add_particle(ConstSpan x, std::int64_t id) {
    particle_x.insert(particle_x.end(), x.begin(), x.end());
    particle_id.push_back(id);
}

void TwoTypeConfiguration::remove_sphere(std::size_t i) {
    std::size_t last = sphere_count() - 1;
    auto dd = static_cast<std::size_t>(d);
    for (std::size_t k = 0; k < dd; ++k) sphere_x[i * dd + k] = sphere_x[last * dd + k];
    sphere_id[i] = sphere_id[last];
    sphere_x.resize(last * dd);
    sphere_id.pop_back();
}

void TwoTypeConfiguration::remove_particle(std::size_t k) {
    std::size_t last = particle_count() - 1;
    auto dd = static_cast<std::size_t>(d);
    for (std::size_t j = 0; j < dd; ++j) particle_x[k * dd + j] = particle_x[last * dd + j];
    particle_id[k] = particle_id[last];
    particle_x.resize(last * dd);
    particle_id.pop_back();
}

std::int64_t TwoTypeConfiguration::next_sphere_id() const {
    std::int64_t top = -1;
    for (auto id : sphere_id) top = std::max(top, id);
    return top + 1;
}

std::int64_t TwoTypeConfiguration::next_particle_id() const {
    std::int64_t top = -1;
    for (auto id : particle_id) top = std::max(top, id);
    return top + 1;
}

double SimulationDomain::distance2(ConstSpan a, ConstSpan b) const {
    double s = 0.0;
    if (periodic()) {
        for (int k = 0; k < d; ++k) {
            double dx = a[static_cast<std::size_t>(k)] - b[static_cast<std::size_t>(k)];
            double side = box_sides[static_cast<std::size_t>(k)];
            dx -= side * std::round(dx / side);
            s += dx * dx;
        }
    } else {
        for (int k = 0; k < d; ++k) {
            double dx = a[static_cast<std::size_t>(k)] - b[static_cast<std::size_t>(k)];
            s += dx * dx;
        }
    }
    return s;
}

double SimulationDomain::distance(ConstSpan a, ConstSpan b) const {
    return std::sqrt(distance2(a, b));
}

void SimulationDomain::validate() const {
    if (d < 1) throw std::invalid_argument("domain: dimension must be >= 1");
    if (!(r_sphere > 0.0)) throw std::invalid_argument("domain: r_sphere must be positive");
    if (!(r_particle > 0.0) || !(r_particle < r_sphere))
        throw std::invalid_argument("domain: r_particle must satisfy 0 < r_particle < r_sphere");
    if (!(sigma > 0.0)) throw std::invalid_argument("domain: sigma must be positive");
    if (container == ContainerKind::ball && !(ball_radius > 0.0))
        throw std::invalid_argument("domain: ball container needs a positive radius");
    if (container == ContainerKind::periodic_box) {
        if (box_sides.size() != static_cast<std::size_t>(d))
            throw std::invalid_argument("domain: periodic box needs d side lengths");
        for (double s : box_sides)
            if (!(s > 0.0)) throw std::invalid_argument("domain: box sides must be positive");
    }
    if (exterior.d != d && (exterior.sphere_count() || exterior.particle_count()))
        throw std::invalid_argument("domain: exterior dimension mismatch");
}

namespace {

double wrap_coord(double x, double side) {
    double w = std::fmod(x, side);
    if (w < 0.0) w += side;
    return w;
}

}  // namespace

NeighborGrid::NeighborGrid(const SimulationDomain& dom, double cutoff,
                           ConstSpan points, int d)
    : dom_(&dom), cutoff_(cutoff), d_(d), points_(points) {
    if (!(cutoff > 0.0)) throw std::invalid_argument("neighbor grid: cutoff must be positive");
    count_ = points.size() / static_cast<std::size_t>(d);
    origin_.assign(static_cast<std::size_t>(d), 0.0);
    shape_.assign(static_cast<std::size_t>(d), 1);
    cell_side_.assign(static_cast<std::size_t>(d), 1.0);
    wrap_ = dom.periodic();

    if (wrap_) {
        for (int k = 0; k < d; ++k) {
            double side = dom.box_sides[static_cast<std::size_t>(k)];
            int n = std::max(1, static_cast<int>(std::floor(side / cutoff)));
            n = std::min(n, 64);
            shape_[static_cast<std::size_t>(k)] = n;
            cell_side_[static_cast<std::size_t>(k)] = side / n;
        }
    } else if (count_ > 0) {
        std::vector<double> hi(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            origin_[static_cast<std::size_t>(k)] = points[static_cast<std::size_t>(k)];
            hi[static_cast<std::size_t>(k)] = points[static_cast<std::size_t>(k)];
        }
        for (std::size_t i = 1; i < count_; ++i)
            for (int k = 0; k < d; ++k) {
                double v = points[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)];
                origin_[static_cast<std::size_t>(k)] =
                    std::min(origin_[static_cast<std::size_t>(k)], v);
                hi[static_cast<std::size_t>(k)] = std::max(hi[static_cast<std::size_t>(k)], v);
            }
        for (int k = 0; k < d; ++k) {
            double extent = hi[static_cast<std::size_t>(k)] - origin_[static_cast<std::size_t>(k)];
            int n = extent > 0.0 ? static_cast<int>(std::floor(extent / cutoff)) : 1;
            n = std::clamp(n, 1, 64);
            shape_[static_cast<std::size_t>(k)] = n;
            cell_side_[static_cast<std::size_t>(k)] = extent > 0.0 ? extent / n : 1.0;
        }
    }

    std::size_t total = 1;
    for (int n : shape_) total *= static_cast<std::size_t>(n);
    cells_.assign(total, {});
    for (std::size_t i = 0; i < count_; ++i)
        cells_[cell_of(points.subspan(i * static_cast<std::size_t>(d),
                                      static_cast<std::size_t>(d)))]
            .push_back(i);
}

std::size_t NeighborGrid::cell_of(ConstSpan x) const {
    std::size_t id = 0;
    for (int k = 0; k < d_; ++k) {
        auto ku = static_cast<std::size_t>(k);
        double v = x[ku] - origin_[ku];
        if (wrap_) v = wrap_coord(x[ku], dom_->box_sides[ku]);
        int c = static_cast<int>(std::floor(v / cell_side_[ku]));
        c = std::clamp(c, 0, shape_[ku] - 1);
        id = id * static_cast<std::size_t>(shape_[ku]) + static_cast<std::size_t>(c);
    }
    return id;
}

double NeighborGrid::point_dist2(ConstSpan a, ConstSpan b) const {
    return dom_->distance2(a, b);
}

namespace {

// All distinct cell ids reachable by offsets in {-1,0,1}^d from base coords.
void neighbor_cells(const std::vector<int>& base, const std::vector<int>& shape, bool wrap,
                    std::vector<std::size_t>& out) {
    out.clear();
    auto d = base.size();
    std::vector<int> off(d, -1);
    for (;;) {
        bool valid = true;
        std::size_t id = 0;
        for (std::size_t k = 0; k < d && valid; ++k) {
            int c = base[k] + off[k];
            if (wrap) {
                c = (c % shape[k] + shape[k]) % shape[k];
            } else if (c < 0 || c >= shape[k]) {
                valid = false;
            }
            if (valid) id = id * static_cast<std::size_t>(shape[k]) + static_cast<std::size_t>(c);
        }
        if (valid) out.push_back(id);
        std::size_t k = d;
        while (k > 0) {
            --k;
            if (off[k] < 1) {
                ++off[k];
                break;
            }
            off[k] = -1;
            if (k == 0) {
                std::sort(out.begin(), out.end());
                out.erase(std::unique(out.begin(), out.end()), out.end());
                return;
            }
        }
    }
}

}  // namespace

void NeighborGrid::query(ConstSpan x, std::vector<std::size_t>& out) const {
    out.clear();
    std::vector<int> base(static_cast<std::size_t>(d_));
    for (int k = 0; k < d_; ++k) {
        auto ku = static_cast<std::size_t>(k);
        double v = x[ku] - origin_[ku];
        if (wrap_) v = wrap_coord(x[ku], dom_->box_sides[ku]);
        base[ku] = std::clamp(static_cast<int>(std::floor(v / cell_side_[ku])), 0,
                              shape_[ku] - 1);
    }
    std::vector<std::size_t> cand;
    neighbor_cells(base, shape_, wrap_, cand);
    double c2 = cutoff_ * cutoff_;
    for (std::size_t cell : cand)
        for (std::size_t i : cells_[cell]) {
            auto p = points_.subspan(i * static_cast<std::size_t>(d_),
                                     static_cast<std::size_t>(d_));
            if (point_dist2(p, x) <= c2) out.push_back(i);
        }
    std::sort(out.begin(), out.end());
}

void NeighborGrid::pairs(std::vector<std::pair<std::size_t, std::size_t>>& out) const {
    out.clear();
    double c2 = cutoff_ * cutoff_;
    std::vector<int> base(static_cast<std::size_t>(d_));
    std::vector<std::size_t> cand;
    auto point = [&](std::size_t i) {
        return points_.subspan(i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_));
    };
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        if (cells_[c].empty()) continue;
        std::size_t rem = c;
        for (std::size_t k = static_cast<std::size_t>(d_); k > 0; --k) {
            base[k - 1] = static_cast<int>(rem % static_cast<std::size_t>(shape_[k - 1]));
            rem /= static_cast<std::size_t>(shape_[k - 1]);
        }
        neighbor_cells(base, shape_, wrap_, cand);
        for (std::size_t c2id : cand) {
            if (c2id < c) continue;
            const auto& a = cells_[c];
            const auto& b = cells_[c2id];
            if (c2id == c) {
                for (std::size_t ia = 0; ia < a.size(); ++ia)
                    for (std::size_t ib = ia + 1; ib < a.size(); ++ib)
                        if (point_dist2(point(a[ia]), point(a[ib])) <= c2)
                            out.emplace_back(std::min(a[ia], a[ib]), std::max(a[ia], a[ib]));
            } else {
                for (std::size_t ia : a)
                    for (std::size_t ib : b)
                        if (point_dist2(point(ia), point(ib)) <= c2)
                            out.emplace_back(std::min(ia, ib), std::max(ia, ib));
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

namespace {

bool all_finite(const std::vector<double>& xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

bool pair_ok(const SimulationDomain& dom, ConstSpan a, ConstSpan b, double threshold,
             double slack) {
    double t = threshold - slack;
    if (t <= 0.0) return true;
    return dom.distance2(a, b) >= t * t;
}

}  // namespace

bool is_admissible(const TwoTypeConfiguration& config, const SimulationDomain& dom,
                   double slack, bool include_exterior) {
    if (slack < 0.0) throw std::invalid_argument("is_admissible: slack must be non-negative");
    if (!all_finite(config.sphere_x) || !all_finite(config.particle_x)) return false;

    double ss = 2.0 * dom.r_sphere;
    double sp = dom.r_sum();
    std::size_t ns = config.sphere_count();
    std::size_t np = config.particle_count();

    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = i + 1; j < ns; ++j)
            if (!pair_ok(dom, config.sphere(i), config.sphere(j), ss, slack)) return false;
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t k = 0; k < np; ++k)
            if (!pair_ok(dom, config.sphere(i), config.particle(k), sp, slack)) return false;

    if (include_exterior) {
        const auto& ext = dom.exterior;
        for (std::size_t i = 0; i < ns; ++i) {
            for (std::size_t j = 0; j < ext.sphere_count(); ++j)
                if (!pair_ok(dom, config.sphere(i), ext.sphere(j), ss, slack)) return false;
            for (std::size_t k = 0; k < ext.particle_count(); ++k)
                if (!pair_ok(dom, config.sphere(i), ext.particle(k), sp, slack)) return false;
        }
        for (std::size_t k = 0; k < np; ++k)
            for (std::size_t j = 0; j < ext.sphere_count(); ++j)
                if (!pair_ok(dom, config.particle(k), ext.sphere(j), sp, slack)) return false;
    }
    return true;
}

std::vector<NeighborPair> neighbor_pairs(const TwoTypeConfiguration& config,
                                         const SimulationDomain& dom, double cutoff) {
    std::size_t ns = config.sphere_count();
    std::size_t np = config.particle_count();
    auto dd = static_cast<std::size_t>(config.d);

    std::vector<double> flat;
    flat.reserve((ns + np) * dd);
    flat.insert(flat.end(), config.sphere_x.begin(), config.sphere_x.end());
    flat.insert(flat.end(), config.particle_x.begin(), config.particle_x.end());

    std::vector<NeighborPair> result;
    if (ns + np < 2) return result;

    NeighborGrid grid(dom, cutoff, ConstSpan(flat.data(), flat.size()), config.d);
    std::vector<std::pair<std::size_t, std::size_t>> raw;
    grid.pairs(raw);

    auto describe = [&](std::size_t i) -> std::pair<char, std::int64_t> {
        if (i < ns) return {'S', config.sphere_id[i]};
        return {'P', config.particle_id[i - ns]};
    };
    auto point = [&](std::size_t i) { return ConstSpan(flat.data() + i * dd, dd); };

    for (auto [i, j] : raw) {
        auto [ta, ida] = describe(i);
        auto [tb, idb] = describe(j);
        result.push_back({make_pair_key(ta, ida, tb, idb), dom.distance(point(i), point(j))});
    }
    std::sort(result.begin(), result.end(), [](const NeighborPair& a, const NeighborPair& b) {
        return pair_key_less(a.key, b.key);
    });
    return result;
}

VolumeEstimate forbidden_region_volume(const std::vector<double>& sphere_centres,
                                       const SimulationDomain& dom, VolumeMethod method,
                                       std::int64_t mc_samples, std::uint64_t seed) {
    auto dd = static_cast<std::size_t>(dom.d);
    std::size_t n = sphere_centres.size() / dd;
    double r = dom.r_sum();

    if (method == VolumeMethod::exact_pairwise) {
        DepletionParams p;
        p.d = dom.d;
        p.r_sphere = dom.r_sphere;
        p.r_particle = dom.r_particle;
        if (!p.pairwise_regime())
            throw std::invalid_argument(
                "forbidden_region_volume: exact-pairwise needs the dilute regime "
                "r_particle/r_sphere <= 2/sqrt(3)-1; triple overlaps possible here");
        return {energy(sphere_centres, dom, p), 0.0};
    }

    if (mc_samples < 1)
        throw std::invalid_argument("forbidden_region_volume: monte-carlo needs samples");
    if (n == 0) return {0.0, 0.0};

    std::vector<double> lo(dd), hi(dd);
    double box_volume = 1.0;
    if (dom.periodic()) {
        for (std::size_t k = 0; k < dd; ++k) {
            lo[k] = 0.0;
            hi[k] = dom.box_sides[k];
            box_volume *= dom.box_sides[k];
        }
    } else {
        for (std::size_t k = 0; k < dd; ++k) {
            lo[k] = sphere_centres[k];
            hi[k] = sphere_centres[k];
        }
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0; k < dd; ++k) {
                lo[k] = std::min(lo[k], sphere_centres[i * dd + k]);
                hi[k] = std::max(hi[k], sphere_centres[i * dd + k]);
            }
        for (std::size_t k = 0; k < dd; ++k) {
            lo[k] -= r;
            hi[k] += r;
            box_volume *= hi[k] - lo[k];
        }
    }

    Rng rng(seed);
    std::vector<double> x(dd);
    double r2 = r * r;
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < mc_samples; ++s) {
        for (std::size_t k = 0; k < dd; ++k) x[k] = rng.uniform(lo[k], hi[k]);
        for (std::size_t i = 0; i < n; ++i) {
            if (dom.distance2(ConstSpan(x.data(), dd),
                              ConstSpan(sphere_centres.data() + i * dd, dd)) <= r2) {
                ++hits;
                break;
            }
        }
    }
    double p_hat = static_cast<double>(hits) / static_cast<double>(mc_samples);
    double se = box_volume * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(mc_samples));
    return {box_volume * p_hat, se};
}

double unit_ball_volume(int d) {
    if (d < 0) throw std::invalid_argument("unit_ball_volume: dimension must be >= 0");
    return std::pow(std::numbers::pi_v<double>, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double max_packing_density(int d, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("max_packing_density: radius must be positive");
    switch (d) {
        case 1: return 1.0 / (2.0 * r);
        case 2: return 1.0 / (2.0 * std::numbers::sqrt3_v<double> * r * r);
        case 3: return std::numbers::sqrt2_v<double> / (8.0 * r * r * r);
        default:
            throw std::invalid_argument("max_packing_density: closed form known for d <= 3 only");
    }
}

}  // namespace colloid
