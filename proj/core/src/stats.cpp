#include "colloid/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace colloid {

double MeanAccumulator::std_error() const {
    if (n < 2) return 0.0;
    return std::sqrt(variance() / static_cast<double>(n));
}

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
    if (trials <= 0) throw std::invalid_argument("wilson_interval: trials must be positive");
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_continued_fraction(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_continued_fraction(a, x);
}

double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_continued_fraction(a, x);
}

double chi_square_p_value(double statistic, int dof) {
    if (dof <= 0) throw std::invalid_argument("chi_square_p_value: dof must be positive");
    if (statistic <= 0.0) return 1.0;
    return gamma_q(0.5 * dof, 0.5 * statistic);
}

void Histogram::add(double x) {
    ++total;
    if (x < lo) {
        ++underflow;
        return;
    }
    if (x >= hi) {
        ++overflow;
        return;
    }
    auto b = static_cast<std::size_t>((x - lo) / (hi - lo) * counts.size());
    if (b >= counts.size()) b = counts.size() - 1;
    ++counts[b];
}

ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& observed,
                               const std::vector<double>& expected,
                               double min_expected) {
    if (observed.size() != expected.size() || observed.empty())
        throw std::invalid_argument("chi_square_gof: size mismatch");
    double obs_total = 0.0, exp_total = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        obs_total += static_cast<double>(observed[i]);
        exp_total += expected[i];
    }
    if (obs_total <= 0.0 || exp_total <= 0.0)
        throw std::invalid_argument("chi_square_gof: empty totals");
    double scale = obs_total / exp_total;

    // pool small-expectation bins left to right
    std::vector<double> obs_pooled, exp_pooled;
    double o_acc = 0.0, e_acc = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        o_acc += static_cast<double>(observed[i]);
        e_acc += expected[i] * scale;
        if (e_acc >= min_expected) {
            obs_pooled.push_back(o_acc);
            exp_pooled.push_back(e_acc);
            o_acc = e_acc = 0.0;
        }
    }
    if (e_acc > 0.0 || o_acc > 0.0) {
        if (!exp_pooled.empty()) {
            obs_pooled.back() += o_acc;
            exp_pooled.back() += e_acc;
        } else {
            obs_pooled.push_back(o_acc);
            exp_pooled.push_back(e_acc);
        }
    }
    ChiSquareResult r;
    r.dof = static_cast<int>(obs_pooled.size()) - 1;
    if (r.dof < 1) {
        r.dof = 0;
        r.p_value = 1.0;
        return r;
    }
    for (std::size_t i = 0; i < obs_pooled.size(); ++i) {
        double d = obs_pooled[i] - exp_pooled[i];
        r.statistic += d * d / exp_pooled[i];
    }
    r.p_value = chi_square_p_value(r.statistic, r.dof);
    return r;
}

double two_proportion_z(std::int64_t k1, std::int64_t n1, std::int64_t k2, std::int64_t n2) {
    double p1 = static_cast<double>(k1) / static_cast<double>(n1);
    double p2 = static_cast<double>(k2) / static_cast<double>(n2);
    double pooled = static_cast<double>(k1 + k2) / static_cast<double>(n1 + n2);
    double se = std::sqrt(pooled * (1.0 - pooled) *
                          (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
    if (se == 0.0) return 0.0;
    return (p1 - p2) / se;
}

double two_mean_z(double m1, double se1, double m2, double se2) {
    double se = std::sqrt(se1 * se1 + se2 * se2);
    if (se == 0.0) return 0.0;
    return (m1 - m2) / se;
}

} // namespace colloid
