#pragma once

#include <vector>

#include "ilt/quadrature.hpp"

namespace ilt {

// Condition p(d-2) < d with d >= 2, p >= 2; everything here needs it.
bool condition_1_1(int d, int p);
void require_condition_1_1(int d, int p);

// Per-p default tolerance for the nested resolvent quadrature.
double resolvent_default_tol(int p);

// integral over R^d of (integral_0^inf e^{-t} p_t(x) dt)^p dx, evaluated in
// the reduced time-integral form over (0,inf)^p with the corner handled by
// the substitution t_k = u_k^2.
QuadResult resolvent_p_integral(int d, int p, double tol = 0);

// Upper bound on the Gagliardo-Nirenberg best constant from the resolvent
// integral.
double bound_2_4(int d, int p, double tol = 0);

// Lower bound on the large-deviation rate constant gamma_alpha.
double gamma_lower_bound_1_14(int d, int p, double tol = 0);

// phi(t) = sum_j c_j t^{a_j} exp(-b_j t), b_j >= 0.
struct ExpPolyTerm {
    double c = 0;
    int a = 0;
    double b = 0;
};
using ExpPoly = std::vector<ExpPolyTerm>;

double exp_poly_value(const ExpPoly& phi, double t);

struct IdentityReport {
    double lhs = 0;
    double rhs = 0;
    double gap = 0;
};

// Checks the exponential-weight simplex identity: the ordered-time integral
// of phi_1(s_1) prod phi_k(s_k - s_{k-1}) under e^{-t} dt equals the product
// of the individual e^{-t}-transforms. LHS is evaluated by grid convolution
// on the simplex side, RHS by 1-d quadrature.
IdentityReport identity_1_9_check(const std::vector<ExpPoly>& phis, double horizon = 60.0,
                                  double grid_step = 0.01);

} // namespace ilt
