#include "ilt/quadrature.hpp"

#include <cmath>
#include <vector>

#include "ilt/errors.hpp"

namespace ilt {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);
    double kron = kWgk[7] * fv[7];
    double gauss = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kron += kWgk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) gauss += kWg[i / 2] * (fv[i] + fv[14 - i]);
    }
    Panel p{a, b, kron * h, 0};
    const double diff = std::fabs(kron - gauss) * h;
    p.error = diff;
    return p;
}

} // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, std::size_t max_evals) {
    QuadResult out;
    if (a == b) return out;
    std::vector<Panel> panels{gk15(f, a, b)};
    out.evals = 15;
    for (;;) {
        double total_err = 0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total_err += panels[i].error;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        if (total_err <= abs_tol || panels[worst].error == 0) {
            for (const Panel& p : panels) out.value += p.value;
            out.error = total_err;
            return out;
        }
        if (out.evals >= max_evals)
            fail(errc::no_convergence, "quadrature did not reach the requested tolerance");
        const Panel bad = panels[worst];
        const double mid = 0.5 * (bad.a + bad.b);
        panels[worst] = gk15(f, bad.a, mid);
        panels.push_back(gk15(f, mid, bad.b));
        out.evals += 30;
    }
}

double grid_integral(const std::vector<double>& f, std::size_t i, double h) {
    if (i == 0) return 0;
    if (i == 1) return 0.5 * h * (f[0] + f[1]);
    double total = 0;
    std::size_t start = 0;
    if (i % 2 == 1) { // peel a 3/8 panel so the rest is even
        if (i >= 3) {
            total += 3.0 * h / 8.0 * (f[0] + 3 * f[1] + 3 * f[2] + f[3]);
            start = 3;
        } else {
            return 0.5 * h * (f[0] + 2 * f[1] + f[2]);
        }
    }
    for (std::size_t j = start; j + 2 <= i; j += 2)
        total += h / 3.0 * (f[j] + 4 * f[j + 1] + f[j + 2]);
    return total;
}

} // namespace ilt
