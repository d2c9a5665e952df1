#include "ilt/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "ilt/analytic_bounds.hpp"
#include "ilt/errors.hpp"
#include "ilt/lattice.hpp"
#include "ilt/quadrature.hpp"
#include "ilt/rng.hpp"

namespace ilt {

namespace {

double ipow(double x, int e) {
    double v = 1;
    for (int i = 0; i < e; ++i) v *= x;
    return v;
}

struct OdeParams {
    int d, p;
    double a, b; // a = d(p-1)/2, b = (2p - d(p-1))/2
};

OdeParams params_for(int d, int p) {
    require_condition_1_1(d, p);
    OdeParams pp{d, p, d * (p - 1) / 2.0, (2 * p - d * (p - 1)) / 2.0};
    return pp;
}

struct State {
    double r, f, g; // g = f'
};

void deriv(const OdeParams& pp, double r, double f, double g, double& df, double& dg) {
    df = g;
    dg = -(pp.d - 1) / r * g + (pp.b * f - ipow(f, 2 * pp.p - 1)) / pp.a;
}

// One Cash-Karp 4(5) step; returns the embedded error estimate.
double ck_step(const OdeParams& pp, const State& y, double h, State& out) {
    static constexpr double b21 = 1.0 / 5;
    static constexpr double b31 = 3.0 / 40, b32 = 9.0 / 40;
    static constexpr double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
    static constexpr double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27, b54 = 35.0 / 27;
    static constexpr double b61 = 1631.0 / 55296, b62 = 175.0 / 512, b63 = 575.0 / 13824,
                            b64 = 44275.0 / 110592, b65 = 253.0 / 4096;
    static constexpr double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594,
                            c6 = 512.0 / 1771;
    static constexpr double d1 = c1 - 2825.0 / 27648, d3 = c3 - 18575.0 / 48384,
                            d4 = c4 - 13525.0 / 55296, d5 = -277.0 / 14336, d6 = c6 - 0.25;
    static constexpr double a2 = 0.2, a3 = 0.3, a4 = 0.6, a5 = 1.0, a6 = 0.875;

    double k1f, k1g, k2f, k2g, k3f, k3g, k4f, k4g, k5f, k5g, k6f, k6g;
    deriv(pp, y.r, y.f, y.g, k1f, k1g);
    deriv(pp, y.r + a2 * h, y.f + h * b21 * k1f, y.g + h * b21 * k1g, k2f, k2g);
    deriv(pp, y.r + a3 * h, y.f + h * (b31 * k1f + b32 * k2f), y.g + h * (b31 * k1g + b32 * k2g),
          k3f, k3g);
    deriv(pp, y.r + a4 * h, y.f + h * (b41 * k1f + b42 * k2f + b43 * k3f),
          y.g + h * (b41 * k1g + b42 * k2g + b43 * k3g), k4f, k4g);
    deriv(pp, y.r + a5 * h, y.f + h * (b51 * k1f + b52 * k2f + b53 * k3f + b54 * k4f),
          y.g + h * (b51 * k1g + b52 * k2g + b53 * k3g + b54 * k4g), k5f, k5g);
    deriv(pp, y.r + a6 * h, y.f + h * (b61 * k1f + b62 * k2f + b63 * k3f + b64 * k4f + b65 * k5f),
          y.g + h * (b61 * k1g + b62 * k2g + b63 * k3g + b64 * k4g + b65 * k5g), k6f, k6g);

    out.r = y.r + h;
    out.f = y.f + h * (c1 * k1f + c3 * k3f + c4 * k4f + c6 * k6f);
    out.g = y.g + h * (c1 * k1g + c3 * k3g + c4 * k4g + c6 * k6g);

    const double ef = h * (d1 * k1f + d3 * k3f + d4 * k4f + d5 * k5f + d6 * k6f);
    const double eg = h * (d1 * k1g + d3 * k3g + d4 * k4g + d5 * k5g + d6 * k6g);
    const double sf = std::fabs(y.f) + std::fabs(h * k1f) + 1e-30;
    const double sg = std::fabs(y.g) + std::fabs(h * k1g) + 1e-30;
    return std::max(std::fabs(ef) / sf, std::fabs(eg) / sg);
}

// Adaptive advance from y to r_target; calls observe(y) after each accepted
// step. Returns false if the step size underflows.
template <class Observe>
bool advance(const OdeParams& pp, State& y, double r_target, double tol, std::size_t* evals,
             Observe&& observe) {
    double h = std::min(1e-3, r_target - y.r);
    while (y.r < r_target) {
        h = std::min(h, r_target - y.r);
        State next;
        const double err = ck_step(pp, y, h, next);
        *evals += 6;
        if (err <= tol) {
            y = next;
            observe(y);
            h *= std::min(5.0, 0.9 * std::pow(tol / (err + 1e-300), 0.2));
        } else {
            h *= std::max(0.1, 0.9 * std::pow(tol / err, 0.25));
            if (h < 1e-14) return false;
        }
    }
    return true;
}

State series_start(const OdeParams& pp, double amplitude, double r0) {
    // removes the (d-1)/r singularity: f(r) = f0 + f''(0) r^2 / 2 near 0
    const double f2 = (pp.b * amplitude - ipow(amplitude, 2 * pp.p - 1)) / (pp.a * pp.d);
    return State{r0, amplitude + 0.5 * f2 * r0 * r0, f2 * r0};
}

enum class Shot { too_high, too_low, decayed };

// Classify an amplitude by the first event: zero crossing (too high) or the
// derivative turning nonnegative while f is still sizable (too low).
Shot classify(const OdeParams& pp, double amplitude, const GroundStateOptions& opts,
              std::size_t* evals) {
    State y = series_start(pp, amplitude, 1e-3);
    if (y.g >= 0) return Shot::too_low;
    Shot verdict = Shot::decayed;
    bool decided = false;
    auto observe = [&](const State& s) {
        if (decided) return;
        if (s.f <= 0) {
            verdict = Shot::too_high;
            decided = true;
        } else if (s.g >= 0) {
            verdict = Shot::too_low;
            decided = true;
        } else if (s.f < opts.tail_threshold) {
            verdict = Shot::decayed;
            decided = true;
        }
    };
    double target = opts.r_max;
    while (y.r < target && !decided) {
        const double stop = std::min(target, y.r + 0.25);
        if (!advance(pp, y, stop, opts.ode_tol, evals, observe)) break;
    }
    return verdict;
}

} // namespace

GroundState solve_ground_state(int d, int p, const GroundStateOptions& opts) {
    const OdeParams pp = params_for(d, p);
    GroundState gs;
    gs.d = d;
    gs.p = p;
    gs.grid_h = opts.grid_h;
    gs.r_max = opts.r_max;
    gs.method = "shooting";

    // bracket: scan upward for the first amplitude that crosses zero
    double lo = opts.amp_lo, hi = 0;
    {
        double a = opts.amp_lo;
        Shot s = classify(pp, a, opts, &gs.ode_evals);
        while (s != Shot::too_high) {
            lo = a;
            a *= 1.4;
            if (a > opts.amp_hi * 1.4)
                fail(errc::no_convergence, "no zero-crossing amplitude below the cap");
            s = classify(pp, a, opts, &gs.ode_evals);
        }
        hi = a;
    }
    for (int it = 0; it < opts.bisect_iters && (hi - lo) > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        ++gs.bisections;
        const Shot s = classify(pp, mid, opts, &gs.ode_evals);
        if (s == Shot::too_high) hi = mid;
        else lo = mid; // too_low or fully decayed: ground state is at or above
    }
    gs.amplitude = 0.5 * (lo + hi);

    // dense pass on the uniform grid
    const std::size_t n_nodes = std::size_t(std::llround(opts.r_max / opts.grid_h));
    gs.r.reserve(n_nodes + 1);
    gs.f.reserve(n_nodes + 1);
    gs.df.reserve(n_nodes + 1);
    gs.r.push_back(0);
    gs.f.push_back(gs.amplitude);
    gs.df.push_back(0);

    State y = series_start(pp, gs.amplitude, opts.grid_h);
    gs.r.push_back(y.r);
    gs.f.push_back(y.f);
    gs.df.push_back(y.g);
    bool tail_reached = false;
    for (std::size_t i = 2; i <= n_nodes && !tail_reached; ++i) {
        const double target = double(i) * opts.grid_h;
        if (!advance(pp, y, target, opts.ode_tol, &gs.ode_evals, [](const State&) {})) break;
        if (y.f <= 0 || y.g >= 0) break; // integration left the decaying branch
        gs.r.push_back(y.r);
        gs.f.push_back(y.f);
        gs.df.push_back(y.g);
        tail_reached = y.f < opts.tail_threshold;
    }
    gs.tail_start = gs.r.back();

    // norms: surface-weighted Simpson plus the closed-form exponential tail
    const double s_d = d * unit_ball_volume(d);
    const std::size_t last = gs.r.size() - 1;
    std::vector<double> w2(last + 1), wg(last + 1), w2p(last + 1);
    for (std::size_t i = 0; i <= last; ++i) {
        const double rw = std::pow(gs.r[i], d - 1);
        w2[i] = gs.f[i] * gs.f[i] * rw;
        wg[i] = gs.df[i] * gs.df[i] * rw;
        w2p[i] = ipow(gs.f[i], 2 * p) * rw;
    }
    gs.l2_sq = s_d * grid_integral(w2, last, opts.grid_h);
    gs.grad_sq = s_d * grid_integral(wg, last, opts.grid_h);
    gs.l2p_pow = s_d * grid_integral(w2p, last, opts.grid_h);
    {
        // f ~ c r^{-(d-1)/2} e^{-mu r} beyond the cutoff
        const double mu = std::sqrt(pp.b / pp.a);
        const double rt = gs.r[last], ft = gs.f[last];
        const double rw = std::pow(rt, d - 1);
        gs.l2_sq += s_d * ft * ft * rw / (2 * mu);
        gs.grad_sq += s_d * mu * ft * ft * rw / 2;
        gs.l2p_pow += s_d * ipow(ft, 2 * p) * rw / (2 * p * mu);
    }

    // FD residual of the profile on the grid (second-order stencil)
    const double h = opts.grid_h;
    for (std::size_t i = 2; i + 1 <= last; ++i) {
        const double lap = (gs.f[i + 1] - 2 * gs.f[i] + gs.f[i - 1]) / (h * h) +
                           (d - 1) / gs.r[i] * (gs.f[i + 1] - gs.f[i - 1]) / (2 * h);
        const double res = pp.a * lap - pp.b * gs.f[i] + ipow(gs.f[i], 2 * p - 1);
        gs.residual = std::max(gs.residual, std::fabs(res));
    }
    if (gs.residual > opts.residual_tol)
        fail(errc::residual_too_large, "ground-state residual above tolerance");
    return gs;
}

namespace {

struct FlowResult {
    std::vector<double> f;
    double h = 0;
    double amplitude = 0, l2_sq = 0, grad_sq = 0, l2p_pow = 0, residual = 0;
};

// Petviashvili-stabilized renormalized flow on a radial FD grid. The plain
// normalized flow is degenerate at the L2-critical pair, the stabilization
// factor M^gamma keeps the fixed point attracting for every (d, p) in range.
FlowResult flow_on_grid(const OdeParams& pp, double h, double r_max) {
    const int d = pp.d, p = pp.p;
    const std::size_t n = std::size_t(std::llround(r_max / h)); // unknowns 0..n-1, f_n = 0
    std::vector<double> lower(n, 0), diag(n, 0), upper(n, 0);
    diag[0] = pp.b + 2.0 * pp.a * d / (h * h);
    upper[0] = -2.0 * pp.a * d / (h * h);
    for (std::size_t i = 1; i < n; ++i) {
        const double r = double(i) * h;
        lower[i] = -pp.a * (1.0 / (h * h) - (d - 1) / (2 * h * r));
        diag[i] = pp.b + 2.0 * pp.a / (h * h);
        upper[i] = -pp.a * (1.0 / (h * h) + (d - 1) / (2 * h * r));
    }

    auto apply_l = [&](const std::vector<double>& f, std::vector<double>& out) {
        out[0] = diag[0] * f[0] + upper[0] * f[1];
        for (std::size_t i = 1; i < n; ++i)
            out[i] = lower[i] * f[i - 1] + diag[i] * f[i] + (i + 1 < n ? upper[i] * f[i + 1] : 0.0);
    };
    auto solve_l = [&](const std::vector<double>& rhs, std::vector<double>& f) {
        // Thomas algorithm
        std::vector<double> cp(n), dp(n);
        cp[0] = upper[0] / diag[0];
        dp[0] = rhs[0] / diag[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double m = diag[i] - lower[i] * cp[i - 1];
            cp[i] = (i + 1 < n ? upper[i] : 0.0) / m;
            dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / m;
        }
        f[n - 1] = dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) f[i] = dp[i] - cp[i] * f[i + 1];
    };

    std::vector<double> weight(n); // trapezoid weights with the r^{d-1} factor
    for (std::size_t i = 0; i < n; ++i)
        weight[i] = std::pow(double(i) * h, d - 1) * (i == 0 ? 0.5 : 1.0) * h;

    std::vector<double> f(n), rhs(n), lf(n);
    const double init_amp = 2.0 * std::pow(pp.b, 1.0 / (2 * p - 2));
    for (std::size_t i = 0; i < n; ++i) {
        const double r = double(i) * h;
        f[i] = init_amp * std::exp(-r * r);
    }

    const double gamma = double(2 * p - 1) / (2 * p - 2);
    double m_factor = 0;
    bool converged = false;
    for (int it = 0; it < 4000; ++it) {
        for (std::size_t i = 0; i < n; ++i) rhs[i] = ipow(f[i], 2 * p - 1);
        apply_l(f, lf);
        double num = 0, den = 0;
        for (std::size_t i = 0; i < n; ++i) {
            num += weight[i] * lf[i] * f[i];
            den += weight[i] * rhs[i] * f[i];
        }
        m_factor = num / den;
        solve_l(rhs, f);
        const double scale = std::pow(m_factor, gamma);
        for (std::size_t i = 0; i < n; ++i) f[i] *= scale;
        if (std::fabs(m_factor - 1.0) < 1e-14) {
            converged = true;
            break;
        }
    }
    if (!converged && std::fabs(m_factor - 1.0) > 1e-10)
        fail(errc::no_convergence, "renormalized flow did not reach its fixed point");

    FlowResult out;
    out.h = h;
    out.amplitude = f[0];
    const double s_d = d * unit_ball_volume(d);
    std::vector<double> w2(n + 1, 0.0), wg(n + 1, 0.0), w2p(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        const double fv = i < n ? f[i] : 0.0;
        const double fp = (i == 0) ? 0.0
                          : (i + 1 < n ? (f[i + 1] - f[i - 1]) / (2 * h)
                                       : (0.0 - f[i - 1]) / (2 * h));
        const double rw = std::pow(double(i) * h, d - 1);
        w2[i] = fv * fv * rw;
        wg[i] = fp * fp * rw;
        w2p[i] = ipow(fv, 2 * p) * rw;
    }
    out.l2_sq = s_d * grid_integral(w2, n, h);
    out.grad_sq = s_d * grid_integral(wg, n, h);
    out.l2p_pow = s_d * grid_integral(w2p, n, h);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double r = double(i) * h;
        const double lap = (f[i + 1] - 2 * f[i] + f[i - 1]) / (h * h) +
                           (d - 1) / r * (f[i + 1] - f[i - 1]) / (2 * h);
        const double res = pp.a * lap - pp.b * f[i] + ipow(f[i], 2 * p - 1);
        out.residual = std::max(out.residual, std::fabs(res));
    }
    out.f = std::move(f);
    return out;
}

} // namespace

GroundState solve_ground_state_flow(int d, int p, double h, double r_max) {
    const OdeParams pp = params_for(d, p);
    const FlowResult coarse = flow_on_grid(pp, h, r_max);
    const FlowResult fine = flow_on_grid(pp, h / 2, r_max);

    GroundState gs;
    gs.d = d;
    gs.p = p;
    gs.grid_h = h / 2;
    gs.r_max = r_max;
    gs.method = "gradient-flow";
    // second-order discretization: Richardson-extrapolate the functionals
    gs.amplitude = (4 * fine.amplitude - coarse.amplitude) / 3;
    gs.l2_sq = (4 * fine.l2_sq - coarse.l2_sq) / 3;
    gs.grad_sq = (4 * fine.grad_sq - coarse.grad_sq) / 3;
    gs.l2p_pow = (4 * fine.l2p_pow - coarse.l2p_pow) / 3;
    gs.residual = fine.residual;
    gs.tail_start = r_max;
    gs.r.resize(fine.f.size());
    for (std::size_t i = 0; i < fine.f.size(); ++i) gs.r[i] = double(i) * gs.grid_h;
    gs.f = fine.f;
    gs.df.assign(fine.f.size(), 0.0);
    for (std::size_t i = 1; i + 1 < fine.f.size(); ++i)
        gs.df[i] = (fine.f[i + 1] - fine.f[i - 1]) / (2 * gs.grid_h);
    return gs;
}

double kappa_from_ground_state(const GroundState& gs) {
    return std::pow(gs.p * std::pow(gs.l2_sq, -(gs.p - 1.0)), 1.0 / (2 * gs.p));
}

double variational_M(int d, int p, double kappa) {
    require_condition_1_1(d, p);
    const double q = d * (p - 1);
    const double r = 2 * p - q;
    return r / (2 * p) * std::pow(q / p, q / r) * std::pow(kappa, 4 * p / r);
}

double kappa_from_M(int d, int p, double m_value) {
    require_condition_1_1(d, p);
    const double q = d * (p - 1);
    const double r = 2 * p - q;
    return std::pow(m_value * (2 * p / r) * std::pow(q / p, -q / r), r / (4 * p));
}

RateConstants rate_constants(int d, int p, double det_gamma, double kappa) {
    require_condition_1_1(d, p);
    if (det_gamma <= 0) fail(errc::config_invalid, "det Gamma must be positive");
    const double q = d * (p - 1);
    RateConstants rc;
    rc.d = d;
    rc.p = p;
    rc.det_gamma = det_gamma;
    rc.kappa = kappa;
    rc.m_value = variational_M(d, p, kappa);
    rc.gamma_alpha = (p / 2.0) * std::pow(kappa, -4.0 * p / q);
    rc.moderate_coeff = rc.gamma_alpha * std::pow(det_gamma, 1.0 / d);
    rc.lil_brownian = std::pow(2.0 / p, q / 2.0) * std::pow(kappa, 2.0 * p);
    rc.lil_walk = rc.lil_brownian * std::pow(det_gamma, -(p - 1) / 2.0);
    return rc;
}

double gn_ratio(const RadialTrial& trial, int d, int p, double scale, std::size_t grid_n) {
    const double h = trial.extent / double(grid_n) / scale;
    std::vector<double> w2(grid_n + 1), wg(grid_n + 1), w2p(grid_n + 1);
    for (std::size_t i = 0; i <= grid_n; ++i) {
        // evaluate f(scale * r_i) at scale-free arguments so the quadrature
        // nodes track the rescaling exactly
        const double arg = double(i) * trial.extent / double(grid_n);
        const double fv = trial.value(arg);
        const double fp = scale * trial.slope(arg);
        const double rw = std::pow(double(i) * h, d - 1);
        w2[i] = fv * fv * rw;
        wg[i] = fp * fp * rw;
        w2p[i] = ipow(fv, 2 * p) * rw;
    }
    const double s_d = d * unit_ball_volume(d);
    const double l2_sq = s_d * grid_integral(w2, grid_n, h);
    const double grad_sq = s_d * grid_integral(wg, grid_n, h);
    const double l2p_pow = s_d * grid_integral(w2p, grid_n, h);
    const double theta = d * (p - 1) / (2.0 * p);
    return std::pow(l2p_pow, 1.0 / (2 * p)) /
           (std::pow(grad_sq, theta / 2) * std::pow(l2_sq, (1 - theta) / 2));
}

GnSearchResult gn_violation_search(int d, int p, double kappa, int count, std::uint64_t seed) {
    require_condition_1_1(d, p);
    StreamRng rng(seed, 0xb0b5);
    GnSearchResult out;
    out.kappa = kappa;
    out.count = count;
    for (int t = 0; t < count; ++t) {
        RadialTrial trial;
        const int kind = t % 3;
        if (kind == 0) { // centered Gaussian
            const double lam = 0.2 * std::pow(25.0, rng.unit());
            trial.value = [lam](double r) { return std::exp(-lam * r * r); };
            trial.slope = [lam](double r) { return -2 * lam * r * std::exp(-lam * r * r); };
            trial.extent = std::sqrt(45.0 / lam);
        } else if (kind == 1) { // positive mixture of off-center Gaussians
            const int k = 2 + int(rng.below(2));
            auto lams = std::make_shared<std::vector<std::array<double, 3>>>();
            double extent = 0, lam_min = 1e9;
            for (int j = 0; j < k; ++j) {
                const double c = 0.1 + 0.9 * rng.unit();
                const double lam = 0.3 + 4.7 * rng.unit();
                const double mu = 3.0 * rng.unit();
                lams->push_back({c, lam, mu});
                extent = std::max(extent, mu);
                lam_min = std::min(lam_min, lam);
            }
            trial.extent = extent + std::sqrt(45.0 / lam_min);
            trial.value = [lams](double r) {
                double v = 0;
                for (const auto& [c, lam, mu] : *lams) v += c * std::exp(-lam * (r - mu) * (r - mu));
                return v;
            };
            trial.slope = [lams](double r) {
                double v = 0;
                for (const auto& [c, lam, mu] : *lams)
                    v += -2 * c * lam * (r - mu) * std::exp(-lam * (r - mu) * (r - mu));
                return v;
            };
        } else { // smooth compact bump
            const double radius = 1.0 + 4.0 * rng.unit();
            trial.extent = radius;
            trial.value = [radius](double r) {
                const double s = r / radius;
                if (s >= 1.0) return 0.0;
                return std::exp(-1.0 / (1.0 - s * s));
            };
            trial.slope = [radius](double r) {
                const double s = r / radius;
                if (s >= 1.0) return 0.0;
                const double den = 1.0 - s * s;
                return std::exp(-1.0 / den) * (-2.0 * s / (den * den)) / radius;
            };
        }
        out.max_ratio = std::max(out.max_ratio, gn_ratio(trial, d, p));
    }
    return out;
}

} // namespace ilt
