#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ilt {

struct QuadResult {
    double value = 0;
    double error = 0;
    std::size_t evals = 0;
};

// Adaptive Gauss-Kronrod 15(7) on [a, b] to absolute tolerance abs_tol.
// Throws Error(errc::no_convergence) past max_evals.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, std::size_t max_evals = 50'000'000);

// integral of samples f[0..i] on a uniform grid of spacing h, composite
// Simpson with a 3/8 panel when the interval count is odd.
double grid_integral(const std::vector<double>& f, std::size_t i, double h);

} // namespace ilt
