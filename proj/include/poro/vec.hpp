#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "poro/errors.hpp"

namespace poro {

// Points and directions are plain coordinate vectors; ambient dimension is
// their length. All toolkit geometry lives in R^n with 1 <= n <= 8.
using Vec = std::vector<double>;

inline constexpr int kMaxDim = 8;

inline void check_dim(std::size_t n, const char* what) {
    if (n < 1 || n > static_cast<std::size_t>(kMaxDim))
        throw input_error(std::string(what) + ": ambient dimension must be in [1, 8]");
}

inline void check_same_dim(const Vec& a, const Vec& b, const char* what) {
    if (a.size() != b.size())
        throw input_error(std::string(what) + ": dimension mismatch");
}

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec scaled(const Vec& a, double c) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline void add_scaled_inplace(Vec& a, const Vec& b, double c) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * b[i];
}

inline double dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline bool all_finite(const Vec& a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

inline bool in_open_ball(const Vec& center, double r, const Vec& y) {
    return dist(center, y) < r;
}

inline bool in_closed_ball(const Vec& center, double r, const Vec& y) {
    return dist(center, y) <= r;
}

} // namespace poro
