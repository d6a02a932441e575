#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace colloid {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Replica/worker seeds are base ^ index by contract; the scramble happens
// inside Rng so adjacent raw seeds do not produce correlated streams.
inline std::uint64_t replica_seed(std::uint64_t base, std::uint64_t index) {
    return base ^ index;
}

// mt19937_64 is bit-specified by the standard; the normal transform is done
// by hand because std::normal_distribution is not.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in (0,1]
    double uniform_open() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    // uniform in [0,1)
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        // rejection-free for our n << 2^64 use cases would bias ~2^-40; keep exact
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    // Exact Poisson by uniform multiplication, halving large means so the
    // e^{-mean} threshold never underflows.
    std::int64_t poisson(double mean) {
        if (mean < 0.0) return 0;
        std::int64_t total = 0;
        while (mean > 60.0) {
            double half = mean * 0.5;
            total += poisson(half);
            mean -= half;
        }
        double threshold = std::exp(-mean);
        double prod = uniform_open();
        std::int64_t k = 0;
        while (prod > threshold) {
            ++k;
            prod *= uniform_open();
        }
        return total + k;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform_open();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace colloid
