// End-to-end acceptance checks; prints one PASS/FAIL line per criterion and
// exits nonzero if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <vector>

#include "ilt/analytic_bounds.hpp"
#include "ilt/deviation_lab.hpp"
#include "ilt/ground_state.hpp"
#include "ilt/intersection.hpp"
#include "ilt/moments.hpp"
#include "ilt/rng.hpp"
#include "ilt/step_law.hpp"

using namespace ilt;

namespace {

int g_failures = 0;

void run_criterion(int id, const char* label, const std::function<bool()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string note;
    try {
        ok = body();
    } catch (const std::exception& e) {
        note = std::string(" (exception: ") + e.what() + ")";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %2d: %s [%.1fs]%s\n", ok ? "PASS" : "FAIL", id, label, secs,
                note.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

} // namespace

int main() {
    const StepLaw srw2 = StepLaw::srw(2);

    // solver outputs shared across criteria
    GroundState gs22, gs23;
    double kappa22 = 0, kappa23 = 0;

    run_criterion(1, "exact moments of I_n match the enumeration oracle", [&] {
        bool ok = expected_In_exact(srw2, 1, 2) == Rational(1, 4);
        ok = ok && expected_In_exact(srw2, 2, 2) == Rational(25, 64);
        ok = ok && moment_exact(srw2, 1, 2, 2) == Rational(1, 4);
        for (int n = 1; n <= 3; ++n)
            for (int m = 1; m <= 2; ++m)
                ok = ok && moment_exact(srw2, n, m, 2) == moment_bruteforce(srw2, n, m, 2);
        return ok;
    });

    run_criterion(2, "subadditive moment inequality holds on every small configuration", [&] {
        std::map<std::pair<std::int64_t, int>, MomentEntry> cache;
        const MomentGetter getter = [&](std::int64_t n, int m) {
            auto it = cache.find({n, m});
            if (it != cache.end()) return it->second;
            MomentEntry e = MomentEntry::from_exact(moment_exact(srw2, int(n), m, 2));
            cache.emplace(std::make_pair(n, m), e);
            return e;
        };
        bool ok = true;
        std::vector<std::vector<std::int64_t>> configs;
        for (std::int64_t a = 1; a <= 4; ++a) configs.push_back({a});
        for (std::int64_t a = 1; a <= 4; ++a)
            for (std::int64_t b = 1; b <= 4; ++b) configs.push_back({a, b});
        for (std::int64_t a = 1; a <= 4; ++a)
            for (std::int64_t b = 1; b <= 4; ++b)
                for (std::int64_t c = 1; c <= 4; ++c) configs.push_back({a, b, c});
        for (const auto& blocks : configs)
            for (int m = 1; m <= 2; ++m) {
                const auto rep = check_theorem_5_1(blocks, m, 2, getter);
                ok = ok && rep.holds;
                if (blocks.size() == 1) // single block collapses to equality
                    ok = ok && close(rep.lhs, rep.rhs, 1e-12 * std::max(1.0, rep.rhs));
            }
        return ok;
    });

    run_criterion(3, "planar d=2, p=2 ground state reproduces the known constant", [&] {
        gs22 = solve_ground_state(2, 2);
        kappa22 = kappa_from_ground_state(gs22);
        const double norm_ref = 2 * M_PI * 1.86225;
        std::printf("    kappa(2,2) = %.6f, |f|_2^2 = %.5f (reference %.5f)\n", kappa22,
                    gs22.l2_sq, norm_ref);
        return close(kappa22, 0.6430, 1e-3) &&
               std::fabs(gs22.l2_sq - norm_ref) / norm_ref < 5e-3;
    });

    run_criterion(4, "d=2, p=3 constant lands in the published bracket", [&] {
        gs23 = solve_ground_state(2, 3);
        kappa23 = kappa_from_ground_state(gs23);
        const double conj = std::pow(M_PI, -4.0 / 9.0);
        std::printf("    kappa(2,3) = %.6f, distance to pi^(-4/9): %.2e\n", kappa23,
                    std::fabs(kappa23 - conj));
        return kappa23 > 0.6012 - 2e-3 && kappa23 < 0.6014 + 2e-3;
    });

    run_criterion(5, "quadrature bound chain brackets the solver constants", [&] {
        bool ok = close(resolvent_p_integral(2, 2).value, 1.0 / (2 * M_PI), 1e-8);
        ok = ok && close(resolvent_p_integral(3, 2).value,
                         std::sqrt(M_PI) * std::pow(2 * M_PI, -1.5), 1e-8);
        ok = ok && close(bound_2_4(2, 2), std::pow(M_PI, -0.25), 1e-7);
        ok = ok && close(bound_2_4(3, 2), 0.5916, 1e-3);
        ok = ok && kappa22 < bound_2_4(2, 2);
        ok = ok && kappa_from_ground_state(solve_ground_state(3, 2)) < bound_2_4(3, 2);
        ok = ok && kappa23 < bound_2_4(2, 3);
        ok = ok && kappa_from_ground_state(solve_ground_state(2, 4)) < bound_2_4(2, 4);
        const double gamma_alpha_22 = std::pow(kappa22, -4.0);
        ok = ok && close(gamma_lower_bound_1_14(2, 2), M_PI, 1e-7);
        ok = ok && M_PI <= gamma_alpha_22 && close(gamma_alpha_22, 5.850, 0.05);
        return ok;
    });

    run_criterion(6, "simplex-product integral identity verified numerically", [&] {
        bool ok = identity_1_9_check({ExpPoly{{1.0, 1, 0.0}}}).gap < 1e-6;
        const ExpPoly flat{{1.0, 0, 0.0}}, decay{{1.0, 0, 1.0}};
        ok = ok && identity_1_9_check({flat, flat}).gap < 1e-6;
        ok = ok && identity_1_9_check({decay, decay}).gap < 1e-6;
        StreamRng rng(404, 0);
        for (int trial = 0; trial < 10; ++trial) {
            const int m = 1 + int(rng.below(3));
            std::vector<ExpPoly> phis;
            for (int k = 0; k < m; ++k) {
                ExpPoly phi;
                const int terms = 1 + int(rng.below(2));
                for (int t = 0; t < terms; ++t)
                    phi.push_back(
                        {0.1 + 1.9 * rng.unit(), int(rng.below(3)), 0.5 + 2.5 * rng.unit()});
                phis.push_back(std::move(phi));
            }
            ok = ok && identity_1_9_check(phis).gap < 1e-6;
        }
        return ok;
    });

    run_criterion(7, "Monte Carlo estimates track the exact moments and the weak-law scaling", [&] {
        bool ok = true;
        for (std::int64_t n : {std::int64_t(8), std::int64_t(64)}) {
            ExperimentConfig cfg;
            cfg.p = 2;
            cfg.n = n;
            cfg.replicas = 100000;
            cfg.seed = 12;
            const auto table = run_mc_moments(srw2, cfg, {1});
            const MomentEntry& e = table.entries()[0].second;
            const double exact = to_double(expected_In_exact(srw2, int(n), 2));
            std::printf("    n=%lld: mc %.5f vs exact %.5f (stderr %.5f)\n", (long long)n,
                        e.value, exact, e.stderr_);
            ok = ok && std::fabs(e.value - exact) <= 3 * e.stderr_;
        }
        auto mean_over_n = [&](std::int64_t n, std::int64_t replicas) {
            ExperimentConfig cfg;
            cfg.p = 2;
            cfg.n = n;
            cfg.replicas = replicas;
            cfg.seed = 13;
            const auto samples = run_replicas(srw2, cfg, 0, replicas);
            double mean = 0;
            for (const auto& s : samples) mean += double(s.i_n) / double(n);
            return mean / double(replicas);
        };
        const double a = mean_over_n(10000, 8000);
        const double b = mean_over_n(40000, 3000);
        std::printf("    I_n/n means: %.4f at n=1e4, %.4f at n=4e4\n", a, b);
        return ok && std::fabs(a - b) / b < 0.05;
    });

    run_criterion(8, "random trial functions never beat the extremal constant", [&] {
        bool ok = gn_violation_search(2, 2, kappa22, 1000, 1).max_ratio <= kappa22 * 1.001;
        ok = ok && gn_violation_search(2, 3, kappa23, 1000, 2).max_ratio <= kappa23 * 1.001;
        RadialTrial trial;
        trial.value = [](double r) { return std::exp(-0.7 * r * r); };
        trial.slope = [](double r) { return -1.4 * r * std::exp(-0.7 * r * r); };
        trial.extent = 8.0;
        const double base = gn_ratio(trial, 2, 2);
        for (double scale : {0.3, 2.0, 11.0})
            ok = ok && std::fabs(gn_ratio(trial, 2, 2, scale) - base) < 1e-10;
        return ok;
    });

    run_criterion(9, "desk-scale substitutes for the asymptotic tail and LIL statements", [&] {
        // The exponential tail regime and the a.s. limsup are not reachable at
        // these horizons; we verify the diagnostic substitutes instead.
        const auto rc = rate_constants(2, 2, to_double(srw2.det_covariance()), kappa22);
        bool ok = close(rc.moderate_coeff, 2.925, 0.02);

        ExperimentConfig cfg;
        cfg.p = 2;
        cfg.n = 2048;
        cfg.replicas = 20000;
        cfg.seed = 99;
        const auto pilot = run_replicas(srw2, cfg, 0, cfg.replicas);
        std::vector<double> scaled;
        const double denom = double(cfg.n) * cfg.b_of(cfg.n);
        for (const auto& s : pilot) scaled.push_back(double(s.i_n) / denom);
        std::sort(scaled.begin(), scaled.end());
        cfg.lambda_grid.clear();
        for (double u : {0.30, 0.45, 0.60, 0.75, 0.90}) {
            const double v = scaled[std::size_t(u * double(scaled.size()))];
            const double lambda = v - 1e-6 / denom;
            if (cfg.lambda_grid.empty() || lambda > cfg.lambda_grid.back())
                cfg.lambda_grid.push_back(lambda);
        }
        const auto curve = run_tail_curve(srw2, cfg, rc);
        for (std::size_t i = 0; i < curve.rows.size(); ++i) {
            const TailRow& r = curve.rows[i];
            if (i) ok = ok && r.p_hat < curve.rows[i - 1].p_hat; // strictly decreasing
            ok = ok && close(r.theory, -rc.moderate_coeff * r.lambda, 1e-12);
        }

        ExperimentConfig lil;
        lil.p = 2;
        lil.n = 1000000;
        lil.replicas = 20;
        lil.seed = 5;
        const auto trace = run_lil_trace(srw2, lil, rc);
        double worst = 0;
        for (const auto& row : trace.rows) worst = std::max(worst, row.running_max);
        std::printf("    max LIL statistic %.4f, reference constant %.4f\n", worst,
                    trace.reference);
        ok = ok && worst > 0 && worst < 3.419;
        ok = ok && close(trace.reference, 0.3419, 3e-3);
        return ok;
    });

    run_criterion(10, "experiments are reproducible and merge-order independent", [&] {
        ExperimentConfig cfg;
        cfg.p = 2;
        cfg.n = 256;
        cfg.replicas = 2000;
        cfg.seed = 321;
        cfg.lambda_grid = {0.02, 0.1, 0.3};
        const auto rc = rate_constants(2, 2, 0.25, kappa22);
        const std::string once = render(tail_table(run_tail_curve(srw2, cfg, rc)), "csv");
        const std::string twice = render(tail_table(run_tail_curve(srw2, cfg, rc)), "csv");
        bool ok = once == twice;

        const auto whole = run_replicas(srw2, cfg, 0, cfg.replicas);
        auto b1 = run_replicas(srw2, cfg, 0, 700);
        auto b2 = run_replicas(srw2, cfg, 700, 1400);
        auto b3 = run_replicas(srw2, cfg, 1400, 2000);
        std::vector<ReplicaSample> merged;
        merged.insert(merged.end(), b2.begin(), b2.end());
        merged.insert(merged.end(), b3.begin(), b3.end());
        merged.insert(merged.end(), b1.begin(), b1.end());
        const std::string ta = render(moments_table(pool_moments(cfg, {1, 2}, whole)), "csv");
        const std::string tb = render(moments_table(pool_moments(cfg, {1, 2}, merged)), "csv");
        return ok && ta == tb;
    });

    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
