#pragma once

#include <span>
#include <vector>

#include "ilt/walk.hpp"

namespace ilt {

struct IntersectionResult {
    std::int64_t n = 0;
    int p = 0;
    std::int64_t intersections = 0;       // I_n
    std::int64_t range_intersections = 0; // J_n
    std::vector<std::int64_t> profile;    // optional I_1..I_n
};

// I_n = sum_x prod_j l_j(n, x) over the common support.
std::int64_t intersection_count(std::span<const LocalTimeField> fields);

// J_n: number of sites visited by all p walks within the first n steps.
std::int64_t range_intersection(std::span<const LocalTimeField> fields);

// Incremental I_1..I_n; round k advances every walk by one step, walks are
// updated in fixed order within the round, and each round end is exact.
std::vector<std::int64_t> intersection_profile(std::span<const WalkPath> paths);

// sum_x prod_j l_j(n, x, eps), exact rational.
Rational smoothed_intersection(std::span<const SmoothedField> fields, std::int64_t n);

} // namespace ilt
