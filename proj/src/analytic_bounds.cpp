#include "ilt/analytic_bounds.hpp"

#include <cmath>

#include "ilt/errors.hpp"

namespace ilt {

bool condition_1_1(int d, int p) { return d >= 2 && p >= 2 && p * (d - 2) < d; }

void require_condition_1_1(int d, int p) {
    if (!condition_1_1(d, p))
        fail(errc::condition_violated, "(d, p) outside p(d-2) < d, d >= 2, p >= 2");
}

double resolvent_default_tol(int p) {
    if (p == 2) return 1e-10;
    if (p == 3) return 1e-7;
    return 3e-4;
}

namespace {

// integrand of the reduced form after t_k = u_k^2:
// exp(-sum t) * e_{p-1}(t)^{-d/2} * prod 2 u_k
double reduced_integrand(const std::vector<double>& u, int d) {
    const int p = int(u.size());
    double sum_t = 0, jac = 1;
    for (double v : u) {
        sum_t += v * v;
        jac *= 2 * v;
    }
    // e_{p-1}(t) = sum over j of prod_{k != j} t_k
    double e = 0;
    for (int j = 0; j < p; ++j) {
        double prod = 1;
        for (int k = 0; k < p; ++k)
            if (k != j) prod *= u[std::size_t(k)] * u[std::size_t(k)];
        e += prod;
    }
    if (e == 0) return 0;
    return std::exp(-sum_t) * std::pow(e, -0.5 * d) * jac;
}

double nested_level(std::vector<double>& u, std::size_t level, int d, double upper,
                    double tol, std::size_t* evals) {
    const std::size_t p = u.size();
    auto f = [&](double x) -> double {
        u[level] = x;
        if (level + 1 == p) {
            ++*evals;
            return reduced_integrand(u, d);
        }
        return nested_level(u, level + 1, d, upper, tol * 0.05, evals);
    };
    return integrate(f, 0.0, upper, tol).value;
}

} // namespace

QuadResult resolvent_p_integral(int d, int p, double tol) {
    require_condition_1_1(d, p);
    if (tol <= 0) tol = resolvent_default_tol(p);
    const double pref = std::pow(2 * M_PI, -0.5 * d * (p - 1));
    const double upper = 7.0; // exp(-49) is far below every tolerance in use
    std::vector<double> u(std::size_t(p), 0.0);
    std::size_t evals = 0;
    const double inner = nested_level(u, 0, d, upper, tol / pref / 2, &evals);
    QuadResult out;
    out.value = pref * inner;
    out.error = tol; // budgeted allocation; validated against closed forms in tests
    out.evals = evals;
    return out;
}

double bound_2_4(int d, int p, double tol) {
    require_condition_1_1(d, p);
    const double q = d * (p - 1);
    const double r = 2 * p - q;
    const double res = resolvent_p_integral(d, p, tol).value;
    return std::pow(p / q, q / (4 * p)) * std::pow(2 * p / r, r / (4 * p)) *
           std::pow(res, 1.0 / (2 * p));
}

double gamma_lower_bound_1_14(int d, int p, double tol) {
    require_condition_1_1(d, p);
    const double q = d * (p - 1);
    const double r = 2 * p - q;
    const double res = resolvent_p_integral(d, p, tol).value;
    return (q / 2) * std::pow(r / (2 * p), r / q) * std::pow(res, -2.0 / q);
}

double exp_poly_value(const ExpPoly& phi, double t) {
    double v = 0;
    for (const auto& term : phi) v += term.c * std::pow(t, term.a) * std::exp(-term.b * t);
    return v;
}

IdentityReport identity_1_9_check(const std::vector<ExpPoly>& phis, double horizon,
                                  double grid_step) {
    if (phis.empty()) fail(errc::config_invalid, "need at least one test function");
    const double h = grid_step;
    const std::size_t n = std::size_t(std::llround(horizon / h));

    // H_1 = phi_1, H_k = H_{k-1} * phi_k (convolution on [0, horizon])
    std::vector<double> cur(n + 1);
    for (std::size_t i = 0; i <= n; ++i) cur[i] = exp_poly_value(phis[0], i * h);
    std::vector<double> scratch(n + 1);
    std::vector<double> phik(n + 1);
    for (std::size_t k = 1; k < phis.size(); ++k) {
        for (std::size_t i = 0; i <= n; ++i) phik[i] = exp_poly_value(phis[k], i * h);
        std::vector<double> next(n + 1, 0.0);
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = 0; j <= i; ++j) scratch[j] = cur[j] * phik[i - j];
            next[i] = grid_integral(scratch, i, h);
        }
        cur = std::move(next);
    }

    // lhs = integral of e^{-s} H_m(s) ds (the outer e^{-t} dt integral folded in)
    for (std::size_t i = 0; i <= n; ++i) cur[i] *= std::exp(-double(i) * h);
    IdentityReport rep;
    rep.lhs = grid_integral(cur, n, h);

    rep.rhs = 1;
    for (const auto& phi : phis) {
        auto f = [&phi](double t) { return std::exp(-t) * exp_poly_value(phi, t); };
        rep.rhs *= integrate(f, 0.0, horizon, 1e-12).value;
    }
    rep.gap = std::fabs(rep.lhs - rep.rhs);
    return rep;
}

} // namespace ilt
