#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ilt/analytic_bounds.hpp"
#include "ilt/errors.hpp"
#include "ilt/quadrature.hpp"
#include "ilt/rng.hpp"

using namespace ilt;

TEST_CASE("admissible (d, p) region") {
    CHECK(condition_1_1(2, 2));
    CHECK(condition_1_1(2, 3));
    CHECK(condition_1_1(2, 100));
    CHECK(condition_1_1(3, 2));
    CHECK_FALSE(condition_1_1(3, 3));
    CHECK_FALSE(condition_1_1(4, 2));
    CHECK_FALSE(condition_1_1(1, 2));
    CHECK_FALSE(condition_1_1(2, 1));
    CHECK_THROWS_AS(require_condition_1_1(3, 3), Error);
}

TEST_CASE("adaptive quadrature basics") {
    const auto g = integrate([](double x) { return std::exp(-x); }, 0.0, 30.0, 1e-12);
    CHECK(g.value == doctest::Approx(1.0).epsilon(1e-12));
    // integrable endpoint singularity
    const auto s = integrate([](double x) { return 1.0 / std::sqrt(x); }, 1e-12, 1.0, 1e-9);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-5));
    CHECK_THROWS_AS(
        integrate([](double x) { return std::sin(1e6 * x); }, 0.0, 1.0, 1e-16, 3000), Error);
}

TEST_CASE("uniform-grid integral matches closed forms") {
    const double h = 0.01;
    std::vector<double> f(1001);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(-double(i) * h);
    CHECK(grid_integral(f, 1000, h) == doctest::Approx(1.0 - std::exp(-10.0)).epsilon(1e-10));
    CHECK(grid_integral(f, 999, h) ==
          doctest::Approx(1.0 - std::exp(-9.99)).epsilon(1e-10)); // odd interval count
    CHECK(grid_integral(f, 0, h) == 0.0);
}

TEST_CASE("resolvent integral closed forms") {
    CHECK(resolvent_p_integral(2, 2).value == doctest::Approx(1.0 / (2 * M_PI)).epsilon(1e-8));
    CHECK(resolvent_p_integral(3, 2).value ==
          doctest::Approx(std::sqrt(M_PI) * std::pow(2 * M_PI, -1.5)).epsilon(1e-8));
    CHECK_THROWS_AS(resolvent_p_integral(4, 2), Error);
}

TEST_CASE("three-walk resolvent integral is refinement-stable") {
    const double coarse = resolvent_p_integral(2, 3, 1e-5).value;
    const double fine = resolvent_p_integral(2, 3, 1e-6).value;
    CHECK(std::isfinite(coarse));
    CHECK(std::fabs(coarse - fine) < 1e-5);
}

TEST_CASE("closed-form bounds") {
    CHECK(bound_2_4(2, 2) == doctest::Approx(std::pow(M_PI, -0.25)).epsilon(1e-7));
    CHECK(bound_2_4(2, 2) == doctest::Approx(0.75112).epsilon(1e-4));
    CHECK(bound_2_4(3, 2) == doctest::Approx(0.5916).epsilon(1e-3));
    CHECK(gamma_lower_bound_1_14(2, 2) == doctest::Approx(M_PI).epsilon(1e-7));
}

TEST_CASE("(1.14) and (2.4) are algebraically linked") {
    for (auto [d, p] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 3}, std::pair{2, 4}}) {
        const double q = d * (p - 1);
        const double lower = gamma_lower_bound_1_14(d, p);
        const double upper = bound_2_4(d, p);
        CHECK(lower == doctest::Approx((p / 2.0) * std::pow(upper, -4.0 * p / q)).epsilon(1e-10));
    }
}

TEST_CASE("exponential-polynomial evaluation") {
    const ExpPoly phi{{2.0, 1, 0.5}, {1.0, 0, 0.0}}; // 2 t e^{-t/2} + 1
    CHECK(exp_poly_value(phi, 0.0) == doctest::Approx(1.0));
    CHECK(exp_poly_value(phi, 2.0) == doctest::Approx(4.0 * std::exp(-1.0) + 1.0).epsilon(1e-14));
}

TEST_CASE("simplex-product identity on the listed families") {
    // phi(t) = t, m = 1: both sides 1
    const auto one = identity_1_9_check({ExpPoly{{1.0, 1, 0.0}}});
    CHECK(one.lhs == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(one.gap < 1e-6);

    // phi_1 = phi_2 = 1: both sides 1
    const ExpPoly flat{{1.0, 0, 0.0}};
    const auto pair = identity_1_9_check({flat, flat});
    CHECK(pair.lhs == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(pair.gap < 1e-6);

    // phi_1 = phi_2 = e^{-t}: both sides 1/4
    const ExpPoly decay{{1.0, 0, 1.0}};
    const auto quarter = identity_1_9_check({decay, decay});
    CHECK(quarter.lhs == doctest::Approx(0.25).epsilon(1e-7));
    CHECK(quarter.rhs == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(quarter.gap < 1e-6);
}

TEST_CASE("simplex-product identity on random test functions") {
    StreamRng rng(31, 0);
    for (int trial = 0; trial < 6; ++trial) {
        const int m = 1 + int(rng.below(3));
        std::vector<ExpPoly> phis;
        for (int k = 0; k < m; ++k) {
            ExpPoly phi;
            const int terms = 1 + int(rng.below(2));
            for (int t = 0; t < terms; ++t)
                phi.push_back({0.1 + 1.9 * rng.unit(), int(rng.below(3)), 0.5 + 2.5 * rng.unit()});
            phis.push_back(std::move(phi));
        }
        const auto rep = identity_1_9_check(phis);
        CHECK(rep.gap < 1e-6);
    }
}
