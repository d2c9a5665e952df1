#include "ilt/intersection.hpp"

#include <algorithm>

namespace ilt {

namespace {

std::size_t smallest_field(std::span<const LocalTimeField> fields) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < fields.size(); ++j)
        if (fields[j].counts.size() < fields[best].counts.size()) best = j;
    return best;
}

void check_horizons(std::span<const LocalTimeField> fields) {
    if (fields.empty()) fail(errc::mismatched_horizons, "need at least one field");
    for (const auto& f : fields)
        if (f.n != fields[0].n || f.d != fields[0].d)
            fail(errc::mismatched_horizons, "fields disagree on n or d");
}

} // namespace

std::int64_t intersection_count(std::span<const LocalTimeField> fields) {
    check_horizons(fields);
    const std::size_t lead = smallest_field(fields);
    std::int64_t total = 0;
    for (const auto& [key, count] : fields[lead].counts) {
        std::int64_t prod = count;
        for (std::size_t j = 0; j < fields.size() && prod != 0; ++j) {
            if (j == lead) continue;
            auto it = fields[j].counts.find(key);
            prod = (it == fields[j].counts.end()) ? 0 : prod * it->second;
        }
        total += prod;
    }
    return total;
}

std::int64_t range_intersection(std::span<const LocalTimeField> fields) {
    check_horizons(fields);
    const std::size_t lead = smallest_field(fields);
    std::int64_t count = 0;
    for (const auto& [key, c] : fields[lead].counts) {
        bool everywhere = true;
        for (std::size_t j = 0; j < fields.size() && everywhere; ++j)
            everywhere = (j == lead) || fields[j].counts.count(key) != 0;
        count += everywhere;
    }
    return count;
}

std::vector<std::int64_t> intersection_profile(std::span<const WalkPath> paths) {
    if (paths.empty()) fail(errc::mismatched_horizons, "need at least one path");
    const std::int64_t n = paths[0].n;
    const int d = paths[0].d;
    for (const auto& p : paths)
        if (p.n != n || p.d != d) fail(errc::mismatched_horizons, "paths disagree on n or d");

    const std::size_t p = paths.size();
    std::vector<std::unordered_map<std::uint64_t, std::int64_t>> counts(p);
    for (auto& c : counts) c.reserve(std::size_t(n));

    std::vector<std::int64_t> profile;
    profile.reserve(std::size_t(n));
    std::int64_t running = 0;
    for (std::int64_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < p; ++j) {
            const std::uint64_t key = pack_point(paths[j].positions[std::size_t(k)], d);
            ++counts[j][key];
            std::int64_t prod = 1;
            for (std::size_t jj = 0; jj < p && prod != 0; ++jj) {
                if (jj == j) continue;
                auto it = counts[jj].find(key);
                prod = (it == counts[jj].end()) ? 0 : prod * it->second;
            }
            running += prod;
        }
        profile.push_back(running);
    }
    return profile;
}

Rational smoothed_intersection(std::span<const SmoothedField> fields, std::int64_t n) {
    if (fields.empty()) fail(errc::mismatched_config, "need at least one field");
    if (fields.size() == 1) return Rational(n); // conservation: sum of weights is n
    std::size_t lead = 0;
    for (std::size_t j = 1; j < fields.size(); ++j)
        if (fields[j].size() < fields[lead].size()) lead = j;
    Rational total = 0;
    for (const auto& [key, w] : fields[lead]) {
        Rational prod = w;
        bool alive = true;
        for (std::size_t j = 0; j < fields.size() && alive; ++j) {
            if (j == lead) continue;
            auto it = fields[j].find(key);
            if (it == fields[j].end()) alive = false;
            else prod *= it->second;
        }
        if (alive) total += prod;
    }
    return total;
}

} // namespace ilt
