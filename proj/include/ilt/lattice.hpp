#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ilt/errors.hpp"

namespace ilt {

// Lattice point in Z^d, d <= 4. Unused trailing coordinates stay zero so
// equality and packing are dimension-agnostic.
using Point = std::array<std::int32_t, 4>;

constexpr int kMaxDim = 4;

inline Point origin() { return Point{0, 0, 0, 0}; }

inline Point add(const Point& a, const Point& b) {
    return Point{a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

inline Point sub(const Point& a, const Point& b) {
    return Point{a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

inline Point neg(const Point& a) { return Point{-a[0], -a[1], -a[2], -a[3]}; }

inline std::int64_t norm_sq(const Point& a, int d) {
    std::int64_t s = 0;
    for (int i = 0; i < d; ++i) s += std::int64_t(a[i]) * a[i];
    return s;
}

// Bits available per coordinate when packing into one 64-bit key.
inline int pack_bits(int d) {
    switch (d) {
        case 1: return 62;
        case 2: return 31;
        case 3: return 21;
        case 4: return 15;
        default: fail(errc::config_invalid, "dimension out of range [1,4]");
    }
}

// Lossless pack of a lattice point into a 64-bit hash key. Coordinates are
// bounded by n * max-step in every use, which fits the per-dimension budget.
inline std::uint64_t pack_point(const Point& x, int d) {
    const int bits = pack_bits(d);
    const std::int64_t lim = std::int64_t(1) << (bits - 1);
    std::uint64_t key = 0;
    for (int i = 0; i < d; ++i) {
        std::int64_t c = x[i];
        if (c <= -lim || c >= lim) fail(errc::box_too_large, "coordinate exceeds packing range");
        key = (key << bits) | std::uint64_t(c + lim);
    }
    return key;
}

inline Point unpack_point(std::uint64_t key, int d) {
    const int bits = pack_bits(d);
    const std::int64_t lim = std::int64_t(1) << (bits - 1);
    const std::uint64_t mask = (std::uint64_t(1) << bits) - 1;
    Point x = origin();
    for (int i = d - 1; i >= 0; --i) {
        x[i] = std::int32_t(std::int64_t(key & mask) - lim);
        key >>= bits;
    }
    return x;
}

// Volume of the d-dimensional unit ball.
inline double unit_ball_volume(int d) {
    return std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

// All lattice points of Euclidean norm <= radius.
inline std::vector<Point> ball_points(int d, double radius) {
    std::vector<Point> out;
    if (radius < 0) return out;
    const std::int64_t r = std::int64_t(std::floor(radius));
    const double r2 = radius * radius;
    Point x = origin();
    // iterate the enclosing cube, keep points inside the ball
    std::vector<std::int32_t> c(d, std::int32_t(-r));
    while (true) {
        for (int i = 0; i < d; ++i) x[i] = c[i];
        double nsq = 0;
        for (int i = 0; i < d; ++i) nsq += double(c[i]) * c[i];
        if (nsq <= r2) out.push_back(x);
        int i = 0;
        while (i < d && ++c[i] > r) c[i++] = std::int32_t(-r);
        if (i == d) break;
    }
    return out;
}

} // namespace ilt
