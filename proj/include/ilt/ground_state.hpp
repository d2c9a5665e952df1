#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ilt {

struct GroundStateOptions {
    double r_max = 20.0;
    double grid_h = 1e-3;        // dense output / residual grid
    double ode_tol = 1e-12;      // adaptive integrator tolerance
    double tail_threshold = 1e-8;
    double amp_lo = 0.1;
    double amp_hi = 10.0;
    int bisect_iters = 200;
    double residual_tol = 1e-3;
};

// Radial profile of the positive decaying solution of
//   a f'' + a (d-1)/r f' - b f + f^{2p-1} = 0,  a = d(p-1)/2, b = (2p-d(p-1))/2,
// with f'(0) = 0, no interior zero, f(inf) = 0.
struct GroundState {
    int d = 0;
    int p = 0;
    double grid_h = 0;
    double r_max = 0;
    double amplitude = 0;         // f(0)
    std::vector<double> r;        // uniform grid up to the tail cutoff
    std::vector<double> f;
    std::vector<double> df;
    double tail_start = 0;        // r beyond which the analytic tail is used
    double l2_sq = 0;             // ||f||_2^2 with the surface-measure weight
    double grad_sq = 0;           // ||grad f||_2^2
    double l2p_pow = 0;           // ||f||_{2p}^{2p}
    double residual = 0;          // max FD residual on the grid
    std::string method;           // shooting | gradient-flow
    int bisections = 0;
    std::size_t ode_evals = 0;
};

// Bisection shooting on the amplitude; the ground state is the smallest
// amplitude whose trajectory decays monotonically to the tail threshold.
GroundState solve_ground_state(int d, int p, const GroundStateOptions& opts = {});

// Independent cross-check: stabilized renormalized flow (Petviashvili-type
// fixed point) on a radial finite-difference grid, Richardson-extrapolated.
GroundState solve_ground_state_flow(int d, int p, double h = 0.008, double r_max = 16.0);

double kappa_from_ground_state(const GroundState& gs);

// Algebraic map between kappa and the variational value M, both directions.
double variational_M(int d, int p, double kappa);
double kappa_from_M(int d, int p, double m_value);

struct RateConstants {
    int d = 0;
    int p = 0;
    double det_gamma = 0;
    double kappa = 0;
    double m_value = 0;
    double gamma_alpha = 0;    // large deviations of alpha([0,1]^p)
    double moderate_coeff = 0; // moderate deviations of I_n, with det(Gamma)
    double lil_brownian = 0;   // a.s. limsup constant for alpha
    double lil_walk = 0;       // a.s. limsup constant for I_n
};

RateConstants rate_constants(int d, int p, double det_gamma, double kappa);

// Radial trial function with an analytic derivative; scaling r -> lambda r
// is applied on the quadrature grid so the ratio is exactly scale-covariant.
struct RadialTrial {
    std::function<double(double)> value;
    std::function<double(double)> slope;
    double extent = 10.0; // integration range containing the mass
};

// ||f||_{2p} / (||grad f||_2^theta ||f||_2^{1-theta}), theta = d(p-1)/(2p).
double gn_ratio(const RadialTrial& trial, int d, int p, double scale = 1.0,
                std::size_t grid_n = 4000);

struct GnSearchResult {
    double kappa = 0;
    double max_ratio = 0;
    int count = 0;
};

// Random Gaussian / bump-mixture trials; no ratio may exceed kappa (up to
// discretization slack).
GnSearchResult gn_violation_search(int d, int p, double kappa, int count,
                                   std::uint64_t seed = 1);

} // namespace ilt
