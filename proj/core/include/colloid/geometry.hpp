#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "colloid/vec.hpp"

namespace colloid {

// Flat coordinate storage: point i occupies [i*d, (i+1)*d).
struct TwoTypeConfiguration {
    int d = 3;
    std::vector<double> sphere_x;
    std::vector<std::int64_t> sphere_id;
    std::vector<double> particle_x;
    std::vector<std::int64_t> particle_id;

    std::size_t sphere_count() const { return sphere_id.size(); }
    std::size_t particle_count() const { return particle_id.size(); }

    ConstSpan sphere(std::size_t i) const {
        return ConstSpan(sphere_x.data() + i * static_cast<std::size_t>(d),
                         static_cast<std::size_t>(d));
    }
    Span sphere(std::size_t i) {
        return Span(sphere_x.data() + i * static_cast<std::size_t>(d),
                    static_cast<std::size_t>(d));
    }
    ConstSpan particle(std::size_t k) const {
        return ConstSpan(particle_x.data() + k * static_cast<std::size_t>(d),
                         static_cast<std::size_t>(d));
    }
    Span particle(std::size_t k) {
        return Span(particle_x.data() + k * static_cast<std::size_t>(d),
                    static_cast<std::size_t>(d));
    }

    void add_sphere(ConstSpan x, std::int64_t id);
    void add_particle(ConstSpan x, std::int64_t id);
    // Swap-with-last removal; relative order of the survivors changes.
    void remove_sphere(std::size_t i);
    void remove_particle(std::size_t k);
    std::int64_t next_sphere_id() const;
    std::int64_t next_particle_id() const;
};

enum class ContainerKind { none, ball, periodic_box };

// Geometry of one run: radii, container, and an optional frozen exterior
// configuration that constrains the mobile points but never moves.
struct SimulationDomain {
    int d = 3;
    double r_sphere = 1.0;       // hard-core radius of the large type
    double r_particle = 0.1;     // radius of the small type
    double sigma = 1.0;          // diffusivity ratio of the small type
    ContainerKind container = ContainerKind::none;
    double ball_radius = 0.0;            // container == ball
    std::vector<double> box_sides;       // container == periodic_box, length d
    TwoTypeConfiguration exterior;       // frozen boundary condition

    double r_sum() const { return r_sphere + r_particle; }
    bool periodic() const { return container == ContainerKind::periodic_box; }

    // Squared distance honouring minimum image when periodic.
    double distance2(ConstSpan a, ConstSpan b) const;
    double distance(ConstSpan a, ConstSpan b) const;
    void validate() const;
};

struct PairKey {
    char type_a = 'S';  // 'S' or 'P'
    std::int64_t id_a = 0;
    char type_b = 'S';
    std::int64_t id_b = 0;
};

// Normalised ordering: same-type pairs carry ascending ids, mixed pairs put
// the sphere first; sorting ranks SS before SP before PP, then by ids.
inline PairKey make_pair_key(char ta, std::int64_t ida, char tb, std::int64_t idb) {
    if ((ta == tb && ida > idb) || (ta == 'P' && tb == 'S')) {
        std::swap(ta, tb);
        std::swap(ida, idb);
    }
    return {ta, ida, tb, idb};
}

inline bool operator==(const PairKey& a, const PairKey& b) {
    return a.type_a == b.type_a && a.id_a == b.id_a && a.type_b == b.type_b &&
           a.id_b == b.id_b;
}

inline int pair_key_rank(const PairKey& k) {
    if (k.type_a == 'S') return k.type_b == 'S' ? 0 : 1;
    return 2;
}

inline bool pair_key_less(const PairKey& a, const PairKey& b) {
    int ra = pair_key_rank(a), rb = pair_key_rank(b);
    if (ra != rb) return ra < rb;
    if (a.id_a != b.id_a) return a.id_a < b.id_a;
    return a.id_b < b.id_b;
}

struct NeighborPair {
    PairKey key;
    double distance = 0.0;
};

// Uniform bucket grid over the container (or the bounding box of the points).
// Cells have side >= cutoff so neighbour candidates live in adjacent cells.
class NeighborGrid {
public:
    NeighborGrid(const SimulationDomain& dom, double cutoff,
                 ConstSpan points, int d);

    // Indices (into the point list supplied at build time) of all points whose
    // distance to x is <= cutoff. Output sorted ascending.
    void query(ConstSpan x, std::vector<std::size_t>& out) const;
    // All unordered pairs (i < j) within the cutoff.
    void pairs(std::vector<std::pair<std::size_t, std::size_t>>& out) const;

private:
    const SimulationDomain* dom_;
    double cutoff_;
    int d_;
    ConstSpan points_;
    std::size_t count_;
    std::vector<double> origin_;
    std::vector<int> shape_;
    std::vector<double> cell_side_;
    bool wrap_ = false;
    std::vector<std::vector<std::size_t>> cells_;

    std::size_t cell_of(ConstSpan x) const;
    double point_dist2(ConstSpan a, ConstSpan b) const;
};

// Closed-constraint admissibility with tolerance slack:
//   sphere-sphere separation >= 2 r_sphere - slack,
//   sphere-particle separation >= r_sphere + r_particle - slack.
// include_exterior extends the checks against dom.exterior.
bool is_admissible(const TwoTypeConfiguration& config, const SimulationDomain& dom,
                   double slack, bool include_exterior = true);

// All pairs of mobile points closer than cutoff, keyed by (type, id),
// ordered deterministically: SS pairs, then SP, then PP, each sorted by ids.
std::vector<NeighborPair> neighbor_pairs(const TwoTypeConfiguration& config,
                                         const SimulationDomain& dom, double cutoff);

enum class VolumeMethod { exact_pairwise, monte_carlo };

struct VolumeEstimate {
    double value = 0.0;
    double std_error = 0.0;  // zero for the exact method
};

// Volume of the region a small-type point may not enter: the union of balls
// of radius r_sphere + r_particle around the given sphere centres.
// exact_pairwise requires the dilute regime r_particle/r_sphere <= 2/sqrt(3)-1
// where triple intersections of the enlarged balls are impossible.
VolumeEstimate forbidden_region_volume(const std::vector<double>& sphere_centres,
                                       const SimulationDomain& dom,
                                       VolumeMethod method,
                                       std::int64_t mc_samples = 0,
                                       std::uint64_t seed = 0);

// Largest centre packing density of hard spheres of radius r in dimension d,
// known in closed form for d = 1, 2, 3.
double max_packing_density(int d, double r);

double unit_ball_volume(int d);

}  // namespace colloid
