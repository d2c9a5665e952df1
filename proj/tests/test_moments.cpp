#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>

#include "ilt/kernel_table.hpp"
#include "ilt/moments.hpp"
#include "ilt/step_law.hpp"

using namespace ilt;

TEST_CASE("kernel powers: normalization, symmetry, delta start") {
    const StepLaw law = StepLaw::srw(2);
    KernelPowerTable kernel(law, 6, KernelMode::exact);
    CHECK(kernel.rat(0, origin()) == 1);
    CHECK(kernel.rat(0, Point{1, 0, 0, 0}) == 0);
    for (int i = 0; i <= 6; ++i) {
        Rational total = 0;
        kernel.for_each(i, [&](const Point& x, std::size_t idx) {
            const Rational& v = kernel.rat_flat(i, idx);
            total += v;
            CHECK(kernel.rat(i, neg(x)) == v);
        });
        CHECK(total == 1);
    }
    // parity: odd-time return probability vanishes for the nearest-neighbor walk
    CHECK(kernel.rat(3, origin()) == 0);
    CHECK(kernel.rat(2, origin()) == Rational(1, 4));
}

TEST_CASE("first moments of the intersection local time") {
    const StepLaw law = StepLaw::srw(2);
    CHECK(expected_In_exact(law, 1, 2) == Rational(1, 4));
    CHECK(expected_In_exact(law, 2, 2) == Rational(25, 64));

    // extended-precision mode tracks the exact values
    for (int n = 1; n <= 6; ++n) {
        const double exact = to_double(expected_In_exact(law, n, 2));
        CHECK(double(expected_In_float(law, n, 2)) == doctest::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("second moment formula") {
    const StepLaw law = StepLaw::srw(2);
    CHECK(moment_exact(law, 1, 2, 2) == Rational(1, 4));
    CHECK(moment_exact(law, 1, 1, 2) == Rational(1, 4));
    CHECK(moment_exact(law, 2, 0, 2) == 1);
    CHECK_THROWS_AS(moment_exact(law, 2, 3, 2), Error);
}

TEST_CASE("exact formulas agree with full enumeration") {
    const StepLaw law = StepLaw::srw(2);
    for (int n = 1; n <= 3; ++n)
        for (int m = 1; m <= 2; ++m)
            CHECK(moment_exact(law, n, m, 2) == moment_bruteforce(law, n, m, 2));
    // three walks, shorter horizon
    for (int n = 1; n <= 2; ++n)
        CHECK(moment_exact(law, n, 1, 3) == moment_bruteforce(law, n, 1, 3));
    CHECK_THROWS_AS(moment_bruteforce(law, 20, 1, 2), Error); // budget guard
}

TEST_CASE("Jensen consistency of the exact moments") {
    const StepLaw law = StepLaw::srw(2);
    for (int n = 1; n <= 6; ++n) {
        const Rational m1 = moment_exact(law, n, 1, 2);
        const Rational m2 = moment_exact(law, n, 2, 2);
        CHECK(m1 * m1 <= m2);
    }
}

namespace {

MomentGetter exact_getter(const StepLaw& law, int p) {
    auto cache = std::make_shared<MomentTable>();
    return [&law, p, cache](std::int64_t n, int m) -> MomentEntry {
        const MomentKey key{law.name(), n, m, p, "exact"};
        if (const MomentEntry* hit = cache->find(key)) return *hit;
        MomentEntry e = MomentEntry::from_exact(moment_exact(law, int(n), m, p));
        cache->insert(key, e);
        return e;
    };
}

} // namespace

TEST_CASE("moment inequality with exact inputs") {
    const StepLaw law = StepLaw::srw(2);
    const auto getter = exact_getter(law, 2);

    // single block: the inequality collapses to equality
    const auto eq = check_theorem_5_1({4}, 2, 2, getter);
    CHECK(eq.holds);
    CHECK(eq.lhs == doctest::Approx(eq.rhs).epsilon(1e-14));

    for (const auto& blocks : std::vector<std::vector<std::int64_t>>{
             {1, 1}, {2, 3}, {4, 4}, {1, 2, 3}, {2, 2, 2}}) {
        for (int m = 1; m <= 2; ++m) {
            const auto rep = check_theorem_5_1(blocks, m, 2, getter);
            CHECK(rep.holds);
            CHECK(rep.lhs <= rep.rhs * (1 + 1e-12));
        }
    }
}

TEST_CASE("moment inequality with noisy Monte Carlo inputs") {
    const StepLaw law = StepLaw::srw(2);
    const auto exact = exact_getter(law, 2);
    // fake MC: exact value plus a half-stderr perturbation
    const MomentGetter noisy = [&exact](std::int64_t n, int m) {
        MomentEntry e = exact(n, m);
        e.method = "monte-carlo";
        e.stderr_ = 0.05 * e.value + 1e-6;
        e.value += 0.5 * e.stderr_ * ((n + m) % 2 ? 1 : -1);
        e.exact.reset();
        return e;
    };
    CHECK(check_theorem_5_1({2, 3}, 2, 2, noisy).holds);
}

TEST_CASE("truncated series comparison") {
    const StepLaw law = StepLaw::srw(2);
    const auto getter = exact_getter(law, 2);
    for (double lambda : {0.1, 0.5, 1.0})
        for (const auto& blocks :
             std::vector<std::vector<std::int64_t>>{{3}, {1, 2}, {2, 2}}) {
            const auto rep = check_corollary_5_2(blocks, lambda, 2, 2, getter);
            CHECK(rep.holds);
        }
}

TEST_CASE("missing moments propagate") {
    const MomentGetter nothing = [](std::int64_t, int) -> MomentEntry {
        fail(errc::missing_moment, "not tabulated");
    };
    CHECK_THROWS_AS(check_theorem_5_1({1, 1}, 1, 2, nothing), Error);
    CHECK_THROWS_AS(check_theorem_5_1({}, 1, 2, nothing), Error);
}
