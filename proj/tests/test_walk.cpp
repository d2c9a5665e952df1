#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "ilt/step_law.hpp"
#include "ilt/walk.hpp"

using namespace ilt;

TEST_CASE("point packing round-trips") {
    for (int d = 1; d <= 4; ++d) {
        StreamRng rng(7, d);
        for (int i = 0; i < 500; ++i) {
            Point x = origin();
            for (int j = 0; j < d; ++j)
                x[j] = std::int32_t(rng.below(2001)) - 1000;
            CHECK(unpack_point(pack_point(x, d), d) == x);
        }
    }
}

TEST_CASE("lattice ball enumeration") {
    CHECK(ball_points(2, 0.5).size() == 1); // radius < 1 keeps only the center
    CHECK(ball_points(2, 1.0).size() == 5);
    CHECK(ball_points(2, 2.0).size() == 13);
    CHECK(ball_points(3, 1.0).size() == 7);
    CHECK(unit_ball_volume(2) == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-12));
}

TEST_CASE("simple random walk law") {
    const StepLaw law = StepLaw::srw(2);
    CHECK(law.dim() == 2);
    CHECK(law.support().size() == 4);
    CHECK(law.max_step() == 1);
    CHECK(law.covariance()[0] == Rational(1, 2));
    CHECK(law.covariance()[1] == 0);
    CHECK(law.covariance()[3] == Rational(1, 2));
    CHECK(law.det_covariance() == Rational(1, 4));
    // nearest-neighbor walk has period 2
    CHECK(law.aperiodic_hint() == AperiodicHint::no);

    const StepLaw law3 = StepLaw::builtin("srw3");
    CHECK(law3.dim() == 3);
    CHECK(law3.det_covariance() == Rational(1, 27));

    CHECK_THROWS_WITH_AS(StepLaw::builtin("srw7"), doctest::Contains("unknown builtin"), Error);
}

TEST_CASE("law validation rejects bad inputs") {
    auto pt = [](int a, int b) { return Point{a, b, 0, 0}; };

    std::vector<std::pair<Point, Rational>> asym{
        {pt(1, 0), Rational(1, 2)}, {pt(0, 1), Rational(1, 2)}};
    CHECK_THROWS_AS(StepLaw::build(2, asym), Error);
    try {
        StepLaw::build(2, asym);
    } catch (const Error& e) {
        CHECK(e.code() == errc::not_symmetric);
    }

    std::vector<std::pair<Point, Rational>> unnorm{
        {pt(1, 0), Rational(1, 3)}, {pt(-1, 0), Rational(1, 3)}};
    try {
        StepLaw::build(2, unnorm);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::probabilities_not_normalized);
    }

    std::vector<std::pair<Point, Rational>> flat{
        {pt(1, 0), Rational(1, 2)}, {pt(-1, 0), Rational(1, 2)}};
    try {
        StepLaw::build(2, flat);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::degenerate_support);
    }
}

TEST_CASE("law config parsing") {
    std::istringstream in(
        "# lazy walk on Z^2\n"
        "d 2\n"
        "1 0 1/6\n"
        "-1 0 1/6\n"
        "0 1 1/6\n"
        "0 -1 1/6\n"
        "0 0 1/3\n");
    const StepLaw law = StepLaw::from_config(in, "lazy");
    CHECK(law.support().size() == 5);
    CHECK(law.covariance()[0] == Rational(1, 3));
    // the lazy step makes the walk aperiodic
    CHECK(law.aperiodic_hint() == AperiodicHint::yes);

    std::istringstream bad("1 0 1/2\n-1 0 1/2\n");
    CHECK_THROWS_AS(StepLaw::from_config(bad), Error);
}

TEST_CASE("sampler matches the law and is deterministic") {
    const StepLaw law = StepLaw::srw(2);
    StreamRng rng(42, 0);
    const int trials = 200000;
    std::array<int, 4> counts{};
    for (int i = 0; i < trials; ++i) {
        const Point s = law.sample(rng);
        for (std::size_t j = 0; j < 4; ++j)
            if (s == law.support()[j].first) ++counts[j];
    }
    // 4-sigma band around 1/4 with sigma = sqrt(p(1-p)/N)
    const double sigma = std::sqrt(0.25 * 0.75 / trials);
    for (int c : counts) CHECK(std::fabs(double(c) / trials - 0.25) < 4 * sigma);

    StreamRng a(9, 3), b(9, 3);
    for (int i = 0; i < 100; ++i) CHECK(law.sample(a) == law.sample(b));
    StreamRng c(9, 4);
    bool same = true;
    StreamRng a2(9, 3);
    for (int i = 0; i < 100; ++i) same = same && law.sample(a2) == law.sample(c);
    CHECK_FALSE(same);
}

TEST_CASE("path sampling and local times") {
    const StepLaw law = StepLaw::srw(2);
    const auto path = sample_path(law, 200, 1, 0);
    CHECK(path.positions.size() == 200);
    // every increment is a unit step
    Point prev = origin();
    for (const Point& x : path.positions) {
        CHECK(norm_sq(sub(x, prev), 2) == 1);
        prev = x;
    }

    const auto field = local_time_field(path);
    std::int64_t total = 0;
    for (const auto& [k, c] : field.counts) {
        CHECK(c >= 1);
        total += c;
    }
    CHECK(total == 200); // k = 1..n, time-0 origin excluded
}

TEST_CASE("smoothing configuration and mass conservation") {
    CHECK_THROWS_AS(SmoothConfig::make(2, -1.0, 10, 1.0), Error);
    CHECK_THROWS_AS(SmoothConfig::make(2, 0.5, 10, 0.0), Error);

    const auto tiny = SmoothConfig::make(2, 0.1, 4, 1.0);
    CHECK(tiny.ball_size == 1); // radius < 1: smoothing is the identity

    const StepLaw law = StepLaw::srw(2);
    const auto path = sample_path(law, 64, 5, 1);
    const auto field = local_time_field(path);
    const auto cfg = SmoothConfig::make(2, 2.0, 64, 4.0);
    CHECK(cfg.ball_radius == doctest::Approx(8.0));
    const auto smooth = smoothed_local_time(field, cfg);
    Rational mass = 0;
    for (const auto& [k, v] : smooth) mass += v;
    CHECK(mass == 64); // each visit spreads exactly unit mass

    LocalTimeField wrong;
    wrong.d = 3;
    CHECK_THROWS_AS(smoothed_local_time(wrong, cfg), Error);
}
