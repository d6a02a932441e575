#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace colloid {

using Span = std::span<double>;
using ConstSpan = std::span<const double>;

inline double dot(ConstSpan a, ConstSpan b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(ConstSpan a) { return dot(a, a); }

inline double norm(ConstSpan a) { return std::sqrt(norm2(a)); }

inline void axpy(double c, ConstSpan x, Span y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

inline double dist2_free(ConstSpan a, ConstSpan b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

} // namespace colloid
