#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ilt/step_law.hpp"

namespace ilt {

// Positions S(1..n); S(0) = origin is implicit. Carries replica provenance.
struct WalkPath {
    int d = 0;
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::vector<Point> positions; // positions[k-1] = S(k)
};

// Sparse site -> visit-count map over k = 1..n (origin at time 0 not counted).
struct LocalTimeField {
    int d = 0;
    std::int64_t n = 0;
    std::unordered_map<std::uint64_t, std::int64_t> counts; // keyed by pack_point
};

// Smoothing parameters of the epsilon-ball local time: averaging ball
// B_n = {y : |y| <= epsilon * sqrt(n / b_n)}.
struct SmoothConfig {
    int d = 0;
    double epsilon = 0;
    double b_n = 0;
    double ball_radius = 0;          // epsilon * sqrt(n / b_n)
    std::vector<Point> ball;         // exact lattice-point enumeration
    std::int64_t ball_size = 0;      // #{B_n} >= 1
    double c_d = 0;                  // volume of the d-dimensional unit ball

    static SmoothConfig make(int d, double epsilon, std::int64_t n, double b_n);
};

using SmoothedField = std::unordered_map<std::uint64_t, Rational>;

WalkPath sample_path(const StepLaw& law, std::int64_t n, std::uint64_t seed,
                     std::uint64_t stream);

LocalTimeField local_time_field(const WalkPath& path);

// l(n, x, eps): each visit spreads weight 1/#{B_n} over the ball around it.
SmoothedField smoothed_local_time(const LocalTimeField& field, const SmoothConfig& cfg);

} // namespace ilt
