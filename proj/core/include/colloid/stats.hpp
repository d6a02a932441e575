#pragma once

#include <cstdint>
#include <vector>

namespace colloid {

struct MeanAccumulator {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
    double std_error() const;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval for a binomial proportion at z standard deviations.
Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z);

double normal_cdf(double x);

// regularized incomplete gamma functions
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// upper tail probability of a chi-square statistic with dof degrees of freedom
double chi_square_p_value(double statistic, int dof);

struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<std::int64_t> counts;
    std::int64_t total = 0;
    std::int64_t underflow = 0;
    std::int64_t overflow = 0;

    Histogram() = default;
    Histogram(double lo_, double hi_, int bins) : lo(lo_), hi(hi_), counts(bins, 0) {}
    void add(double x);
    int bins() const { return static_cast<int>(counts.size()); }
    double bin_width() const { return (hi - lo) / counts.size(); }
    double bin_center(int b) const { return lo + (b + 0.5) * bin_width(); }
};

// chi-square goodness of fit of observed counts against expected counts
// (expected scaled to the observed total); bins with expected < min_expected
// are pooled into their right neighbour.
struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};
ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& observed,
                               const std::vector<double>& expected,
                               double min_expected = 5.0);

// z statistic for the difference of two independent proportions
double two_proportion_z(std::int64_t k1, std::int64_t n1, std::int64_t k2, std::int64_t n2);

// z statistic for the difference of two independent means given std errors
double two_mean_z(double m1, double se1, double m2, double se2);

} // namespace colloid
