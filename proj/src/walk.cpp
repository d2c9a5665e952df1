#include "ilt/walk.hpp"

#include <cmath>

namespace ilt {

SmoothConfig SmoothConfig::make(int d, double epsilon, std::int64_t n, double b_n) {
    if (epsilon <= 0 || b_n <= 0 || n < 0)
        fail(errc::config_invalid, "smoothing needs epsilon > 0, b_n > 0, n >= 0");
    SmoothConfig cfg;
    cfg.d = d;
    cfg.epsilon = epsilon;
    cfg.b_n = b_n;
    cfg.ball_radius = epsilon * std::sqrt(double(n) / b_n);
    cfg.ball = ball_points(d, cfg.ball_radius);
    cfg.ball_size = std::int64_t(cfg.ball.size());
    cfg.c_d = unit_ball_volume(d);
    return cfg; // ball always contains the origin, so ball_size >= 1
}

WalkPath sample_path(const StepLaw& law, std::int64_t n, std::uint64_t seed,
                     std::uint64_t stream) {
    if (n < 0) fail(errc::config_invalid, "path length must be >= 0");
    WalkPath path;
    path.d = law.dim();
    path.n = n;
    path.seed = seed;
    path.stream = stream;
    path.positions.reserve(std::size_t(n));
    StreamRng rng(seed, stream);
    Point pos = origin();
    for (std::int64_t k = 0; k < n; ++k) {
        pos = add(pos, law.sample(rng));
        path.positions.push_back(pos);
    }
    return path;
}

LocalTimeField local_time_field(const WalkPath& path) {
    LocalTimeField field;
    field.d = path.d;
    field.n = path.n;
    field.counts.reserve(std::size_t(path.n));
    for (const Point& x : path.positions) ++field.counts[pack_point(x, path.d)];
    return field;
}

SmoothedField smoothed_local_time(const LocalTimeField& field, const SmoothConfig& cfg) {
    if (cfg.d != field.d) fail(errc::mismatched_config, "smoothing dimension mismatch");
    std::unordered_map<std::uint64_t, std::int64_t> acc;
    acc.reserve(field.counts.size() * cfg.ball.size());
    for (const auto& [key, count] : field.counts) {
        const Point x = unpack_point(key, field.d);
        for (const Point& b : cfg.ball) acc[pack_point(add(x, b), field.d)] += count;
    }
    SmoothedField out;
    out.reserve(acc.size());
    for (const auto& [key, count] : acc) out.emplace(key, Rational(count, cfg.ball_size));
    return out;
}

} // namespace ilt
