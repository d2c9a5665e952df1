#include "ilt/moments.hpp"

#include <algorithm>
#include <cmath>

#include "ilt/intersection.hpp"

namespace ilt {

namespace {

Rational rat_pow(const Rational& base, int e) {
    Rational out = 1;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

// Dense accumulation box with per-coordinate radius n * max-step.
struct Box {
    int d = 0;
    std::vector<std::int32_t> radii;
    std::vector<std::size_t> strides;
    std::size_t cells = 1;

    Box(const StepLaw& law, int n) : d(law.dim()) {
        std::vector<std::int32_t> step_max(std::size_t(d), 0);
        for (const auto& [s, q] : law.support())
            for (int j = 0; j < d; ++j)
                step_max[std::size_t(j)] = std::max(step_max[std::size_t(j)], std::abs(s[j]));
        radii.resize(std::size_t(d));
        strides.resize(std::size_t(d));
        for (int j = d - 1; j >= 0; --j) {
            radii[std::size_t(j)] = n * step_max[std::size_t(j)];
            strides[std::size_t(j)] = cells;
            cells *= std::size_t(2 * radii[std::size_t(j)] + 1);
        }
    }

    std::size_t index(const Point& x) const {
        std::size_t idx = 0;
        for (int j = 0; j < d; ++j)
            idx += std::size_t(x[j] + radii[std::size_t(j)]) * strides[std::size_t(j)];
        return idx;
    }
};

} // namespace

void MomentTable::insert(MomentKey key, MomentEntry entry) {
    entries_.emplace_back(std::move(key), std::move(entry));
}

const MomentEntry* MomentTable::find(const MomentKey& key) const {
    for (const auto& [k, e] : entries_)
        if (k == key) return &e;
    return nullptr;
}

Rational expected_In_exact(const StepLaw& law, int n, int p, std::int64_t max_cells) {
    KernelPowerTable kernel(law, n, KernelMode::exact, max_cells);
    Box box(law, n);
    std::vector<Rational> a(box.cells, Rational(0)); // A(x) = sum_{i=1}^n P^i(x)
    for (int i = 1; i <= n; ++i)
        kernel.for_each(i, [&](const Point& x, std::size_t idx) {
            const Rational& v = kernel.rat_flat(i, idx);
            if (v != 0) a[box.index(x)] += v;
        });
    Rational total = 0;
    for (const Rational& v : a)
        if (v != 0) total += rat_pow(v, p);
    return total;
}

long double expected_In_float(const StepLaw& law, int n, int p, std::int64_t max_cells) {
    KernelPowerTable kernel(law, n, KernelMode::floating, max_cells);
    Box box(law, n);
    std::vector<long double> a(box.cells, 0.0L);
    for (int i = 1; i <= n; ++i)
        kernel.for_each(i, [&](const Point& x, std::size_t idx) {
            const long double v = kernel.dbl_flat(i, idx);
            if (v != 0.0L) a[box.index(x)] += v;
        });
    long double total = 0.0L;
    for (long double v : a)
        if (v != 0.0L) total += std::pow(v, (long double)p);
    return total;
}

Rational moment_exact(const StepLaw& law, int n, int m, int p, std::int64_t max_cells) {
    if (m < 0) fail(errc::config_invalid, "moment order must be >= 0");
    if (m == 0) return Rational(1);
    if (m == 1) return expected_In_exact(law, n, p, max_cells);
    if (m > 2) fail(errc::budget_exceeded, "moment_exact supports m <= 2");

    // m = 2: E I_n^2 = sum_{x,y} [E l(n,x) l(n,y)]^p with
    // E l(n,x) l(n,y) = C(x,y) + C(y,x) + 1{x=y} A(x),
    // C(x,y) = sum_{1<=i<j<=n} P^i(x) P^{j-i}(y-x).
    // The time-diagonal i = j collapses to a single site, hence the A term.
    KernelPowerTable kernel(law, n, KernelMode::exact, max_cells);
    Box box(law, n);
    const std::size_t cells = box.cells;
    if (std::int64_t(cells) * std::int64_t(cells) > max_cells)
        fail(errc::box_too_large, "pair box exceeds the configured memory cap");

    std::vector<Rational> a(cells, Rational(0));
    for (int i = 1; i <= n; ++i)
        kernel.for_each(i, [&](const Point& x, std::size_t idx) {
            const Rational& v = kernel.rat_flat(i, idx);
            if (v != 0) a[box.index(x)] += v;
        });

    // cumulative tails T_r(z) = sum_{g=1}^r P^g(z), materialized sparsely per r
    std::vector<std::vector<std::pair<Point, Rational>>> tail(static_cast<std::size_t>(n));
    {
        std::vector<Rational> acc(cells, Rational(0));
        for (int r = 1; r < n; ++r) {
            kernel.for_each(r, [&](const Point& z, std::size_t idx) {
                const Rational& v = kernel.rat_flat(r, idx);
                if (v != 0) acc[box.index(z)] += v;
            });
            // collect nonzeros of the cumulative sum within radius r
            auto& entries = tail[std::size_t(r)];
            Box probe(law, r);
            std::vector<std::int32_t> c(std::size_t(box.d));
            Point z = origin();
            for (int j = 0; j < box.d; ++j) c[std::size_t(j)] = -probe.radii[std::size_t(j)];
            for (;;) {
                for (int j = 0; j < box.d; ++j) z[j] = c[std::size_t(j)];
                const Rational& v = acc[box.index(z)];
                if (v != 0) entries.emplace_back(z, v);
                int j = box.d - 1;
                while (j >= 0 && ++c[std::size_t(j)] > probe.radii[std::size_t(j)]) {
                    c[std::size_t(j)] = -probe.radii[std::size_t(j)];
                    --j;
                }
                if (j < 0) break;
            }
        }
    }

    std::vector<Rational> cmat(cells * cells, Rational(0));
    for (int i = 1; i < n; ++i)
        kernel.for_each(i, [&](const Point& x, std::size_t idx) {
            const Rational& pi = kernel.rat_flat(i, idx);
            if (pi == 0) return;
            const std::size_t xi = box.index(x);
            for (const auto& [z, t] : tail[std::size_t(n - i)])
                cmat[xi * cells + box.index(add(x, z))] += pi * t;
        });

    Rational total = 0;
    for (std::size_t xi = 0; xi < cells; ++xi) {
        if (a[xi] != 0) { // diagonal term exists only at reachable sites
            Rational diag = cmat[xi * cells + xi] * 2 + a[xi];
            total += rat_pow(diag, p);
        }
        for (std::size_t yi = xi + 1; yi < cells; ++yi) {
            Rational v = cmat[xi * cells + yi] + cmat[yi * cells + xi];
            if (v != 0) total += rat_pow(v, p) * 2; // (x,y) and (y,x)
        }
    }
    return total;
}

Rational moment_bruteforce(const StepLaw& law, int n, int m, int p, std::int64_t budget) {
    const std::size_t s = law.support().size();
    const int slots = p * n;
    double combos = std::pow(double(s), slots);
    if (combos > double(budget)) fail(errc::budget_exceeded, "enumeration exceeds budget");

    std::vector<std::size_t> choice(std::size_t(slots), 0);
    std::vector<LocalTimeField> fields(static_cast<std::size_t>(p));
    BigInt num_total = 0;

    // prob of one combo = prod of weights / denom^{slots}
    std::vector<BigInt> weights;
    BigInt denom = 0;
    {
        BigInt lcm = 1;
        for (const auto& [x, q] : law.support())
            lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(q));
        for (const auto& [x, q] : law.support())
            weights.push_back(boost::multiprecision::numerator(Rational(q * lcm)));
        denom = boost::multiprecision::pow(lcm, unsigned(slots));
    }

    for (;;) {
        BigInt w = 1;
        for (std::size_t j = 0; j < std::size_t(slots); ++j) w *= weights[choice[j]];
        for (int j = 0; j < p; ++j) {
            auto& f = fields[std::size_t(j)];
            f.d = law.dim();
            f.n = n;
            f.counts.clear();
            Point pos = origin();
            for (int k = 0; k < n; ++k) {
                pos = add(pos, law.support()[choice[std::size_t(j * n + k)]].first);
                ++f.counts[pack_point(pos, law.dim())];
            }
        }
        const std::int64_t in = intersection_count(fields);
        BigInt in_pow = 1;
        for (int e = 0; e < m; ++e) in_pow *= in;
        num_total += w * in_pow;

        std::size_t j = 0;
        while (j < std::size_t(slots) && ++choice[j] == s) choice[j++] = 0;
        if (j == std::size_t(slots)) break;
    }
    return Rational(num_total, denom);
}

namespace {

void compositions(int m, int parts, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& emit) {
    if (parts == 1) {
        cur.push_back(m);
        emit(cur);
        cur.pop_back();
        return;
    }
    for (int k = 0; k <= m; ++k) {
        cur.push_back(k);
        compositions(m - k, parts - 1, cur, emit);
        cur.pop_back();
    }
}

double multinomial(int m, const std::vector<int>& ks) {
    double v = std::tgamma(m + 1.0);
    for (int k : ks) v /= std::tgamma(k + 1.0);
    return std::round(v);
}

struct Sided {
    double central = 0;
    double shifted = 0; // value +/- 4 stderr, clipped at 0
};

Sided fetch(const MomentGetter& getter, std::int64_t n, int m, int p, bool up) {
    if (m == 0) return {1.0, 1.0};
    MomentEntry e = getter(n, m);
    const double slack = 4.0 * e.stderr_;
    const double shifted = up ? e.value + slack : std::max(e.value - slack, 0.0);
    return {std::pow(e.value, 1.0 / p), std::pow(shifted, 1.0 / p)};
}

} // namespace

InequalityReport check_theorem_5_1(const std::vector<std::int64_t>& blocks, int m, int p,
                                   const MomentGetter& getter) {
    if (blocks.empty() || m < 0 || p < 1) fail(errc::config_invalid, "bad checker arguments");
    std::int64_t total_n = 0;
    for (auto n : blocks) total_n += n;

    const Sided lhs = fetch(getter, total_n, m, p, /*up=*/false);
    double rhs_central = 0, rhs_high = 0;
    std::vector<int> cur;
    compositions(m, int(blocks.size()), cur, [&](const std::vector<int>& ks) {
        const double coeff = multinomial(m, ks);
        double prod_c = coeff, prod_h = coeff;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            const Sided f = fetch(getter, blocks[i], ks[i], p, /*up=*/true);
            prod_c *= f.central;
            prod_h *= f.shifted;
        }
        rhs_central += prod_c;
        rhs_high += prod_h;
    });

    InequalityReport rep;
    rep.lhs = lhs.central;
    rep.rhs = rhs_central;
    rep.holds = lhs.shifted <= rhs_high * (1 + 1e-12) + 1e-15;
    return rep;
}

InequalityReport check_corollary_5_2(const std::vector<std::int64_t>& blocks, double lambda,
                                     int m_star, int p, const MomentGetter& getter) {
    if (blocks.empty() || m_star < 0 || p < 1 || lambda < 0)
        fail(errc::config_invalid, "bad checker arguments");
    std::int64_t total_n = 0;
    for (auto n : blocks) total_n += n;

    double lhs_central = 0, lhs_low = 0;
    double fact = 1;
    for (int m = 0; m <= m_star; ++m) {
        if (m > 0) fact *= m;
        const Sided v = fetch(getter, total_n, m, p, /*up=*/false);
        const double w = std::pow(lambda, m) / fact;
        lhs_central += w * v.central;
        lhs_low += w * v.shifted;
    }

    double rhs_central = 1, rhs_high = 1;
    for (auto n : blocks) {
        double sum_c = 0, sum_h = 0;
        fact = 1;
        for (int m = 0; m <= m_star; ++m) {
            if (m > 0) fact *= m;
            const Sided v = fetch(getter, n, m, p, /*up=*/true);
            const double w = std::pow(lambda, m) / fact;
            sum_c += w * v.central;
            sum_h += w * v.shifted;
        }
        rhs_central *= sum_c;
        rhs_high *= sum_h;
    }

    InequalityReport rep;
    rep.lhs = lhs_central;
    rep.rhs = rhs_central;
    rep.holds = lhs_low <= rhs_high * (1 + 1e-12) + 1e-15;
    return rep;
}

} // namespace ilt
