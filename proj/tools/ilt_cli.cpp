// Command-line front end: simulate | moments | kappa | bounds | tail | lil.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ilt/analytic_bounds.hpp"
#include "ilt/deviation_lab.hpp"
#include "ilt/errors.hpp"
#include "ilt/ground_state.hpp"
#include "ilt/moments.hpp"
#include "ilt/step_law.hpp"

namespace {

using ilt::ExperimentConfig;

struct Shared {
    ExperimentConfig cfg;
    int d = 2;
    std::string config_path;
    std::string law_file;
};

void add_shared(CLI::App* cmd, Shared& sh) {
    cmd->add_option("--d", sh.d, "lattice dimension (builtin laws fix this)");
    cmd->add_option("--p", sh.cfg.p, "number of independent walks");
    cmd->add_option("--law", sh.cfg.law, "step law name: srw2, srw3");
    cmd->add_option("--law-file", sh.law_file, "step law from a text config file");
    cmd->add_option("--n", sh.cfg.n, "time horizon");
    cmd->add_option("--replicas", sh.cfg.replicas, "Monte Carlo replicas");
    cmd->add_option("--seed", sh.cfg.seed, "base RNG seed");
    cmd->add_option("--out", sh.cfg.out, "output file (default stdout)");
    cmd->add_option("--format", sh.cfg.format, "csv or json");
    cmd->add_option("--config", sh.config_path, "key=value file; overrides flags");
}

// key=value lines, '#' comments; values win over command-line flags.
void apply_config_file(Shared& sh) {
    if (sh.config_path.empty()) return;
    std::ifstream in(sh.config_path);
    if (!in) ilt::fail(ilt::errc::config_invalid, "cannot read config " + sh.config_path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        try {
            if (key == "d") sh.d = std::stoi(val);
            else if (key == "p") sh.cfg.p = std::stoi(val);
            else if (key == "law") sh.cfg.law = val;
            else if (key == "law_file") sh.law_file = val;
            else if (key == "n") sh.cfg.n = std::stoll(val);
            else if (key == "replicas") sh.cfg.replicas = std::stoll(val);
            else if (key == "seed") sh.cfg.seed = std::stoull(val);
            else if (key == "out") sh.cfg.out = val;
            else if (key == "format") sh.cfg.format = val;
            else if (key == "rho") sh.cfg.lil_rho = std::stod(val);
            else if (key == "lambda") {
                sh.cfg.lambda_grid.clear();
                std::istringstream ls(val);
                double x;
                while (ls >> x) sh.cfg.lambda_grid.push_back(x);
            } else
                ilt::fail(ilt::errc::config_invalid, "unknown config key: " + key);
        } catch (const std::invalid_argument&) {
            ilt::fail(ilt::errc::config_invalid, "bad value for config key " + key);
        }
    }
}

ilt::StepLaw load_law(const Shared& sh) {
    if (!sh.law_file.empty()) return ilt::StepLaw::from_config_file(sh.law_file);
    return ilt::StepLaw::builtin(sh.cfg.law);
}

void write_out(const Shared& sh, const std::string& text) {
    if (sh.cfg.out.empty())
        std::cout << text;
    else
        ilt::write_text_file(sh.cfg.out, text);
}

ilt::RateConstants rates_for(const ilt::StepLaw& law, int p) {
    const auto gs = ilt::solve_ground_state(law.dim(), p);
    return ilt::rate_constants(law.dim(), p, ilt::to_double(law.det_covariance()),
                               ilt::kappa_from_ground_state(gs));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"intersection local time laboratory"};
    app.require_subcommand(1);

    Shared sh;
    sh.cfg.n = 64;
    sh.cfg.replicas = 100;

    auto* sim = app.add_subcommand("simulate", "per-replica I_n and J_n samples");
    add_shared(sim, sh);

    auto* mom = app.add_subcommand("moments", "exact / brute-force / MC moments of I_n");
    add_shared(mom, sh);
    std::vector<int> orders{1};
    std::string method = "exact";
    mom->add_option("--m", orders, "moment orders");
    mom->add_option("--method", method, "exact | brute | mc");

    auto* kap = app.add_subcommand("kappa", "Gagliardo-Nirenberg best constant");
    add_shared(kap, sh);
    ilt::GroundStateOptions gopt;
    kap->add_option("--tol", gopt.ode_tol, "ODE integrator tolerance");
    kap->add_option("--rmax", gopt.r_max, "radial truncation");
    kap->add_option("--grid", gopt.grid_h, "dense output grid step");

    auto* bnd = app.add_subcommand("bounds", "resolvent integral and closed-form bounds");
    add_shared(bnd, sh);
    double btol = 0;
    bnd->add_option("--tol", btol, "quadrature tolerance (0 = per-p default)");

    auto* tail = app.add_subcommand("tail", "moderate-deviation exceedance curve");
    add_shared(tail, sh);
    tail->add_option("--lambda", sh.cfg.lambda_grid, "increasing threshold grid");

    auto* lil = app.add_subcommand("lil", "iterated-logarithm trace");
    add_shared(lil, sh);
    lil->add_option("--rho", sh.cfg.lil_rho, "geometric checkpoint ratio");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        apply_config_file(sh);

        if (sim->parsed()) {
            const auto law = load_law(sh);
            sh.cfg.validate();
            const auto samples = ilt::run_replicas(law, sh.cfg, 0, sh.cfg.replicas);
            ilt::emit(ilt::replica_table(sh.cfg, samples), sh.cfg);
        } else if (mom->parsed()) {
            const auto law = load_law(sh);
            ilt::MomentTable table;
            if (method == "mc") {
                table = ilt::run_mc_moments(law, sh.cfg, orders);
            } else {
                for (int m : orders) {
                    const ilt::Rational v =
                        method == "brute"
                            ? ilt::moment_bruteforce(law, int(sh.cfg.n), m, sh.cfg.p)
                            : ilt::moment_exact(law, int(sh.cfg.n), m, sh.cfg.p);
                    table.insert(
                        ilt::MomentKey{law.name(), sh.cfg.n, m, sh.cfg.p, "exact"},
                        ilt::MomentEntry::from_exact(
                            v, method == "brute" ? "brute-force" : "exact-formula"));
                }
            }
            ilt::emit(ilt::moments_table(table), sh.cfg);
        } else if (kap->parsed()) {
            const auto gs = ilt::solve_ground_state(sh.d, sh.cfg.p, gopt);
            const double kappa = ilt::kappa_from_ground_state(gs);
            const double q = sh.d * (sh.cfg.p - 1);
            nlohmann::json out{
                {"d", sh.d},
                {"p", sh.cfg.p},
                {"kappa", kappa},
                {"M", ilt::variational_M(sh.d, sh.cfg.p, kappa)},
                {"gamma_alpha", (sh.cfg.p / 2.0) * std::pow(kappa, -4.0 * sh.cfg.p / q)},
                {"lil_brownian",
                 std::pow(2.0 / sh.cfg.p, q / 2.0) * std::pow(kappa, 2.0 * sh.cfg.p)},
                {"norms",
                 {{"l2_sq", gs.l2_sq}, {"grad_sq", gs.grad_sq}, {"l2p_pow", gs.l2p_pow}}},
                {"residual", gs.residual},
                {"solver_diagnostics",
                 {{"method", gs.method},
                  {"amplitude", gs.amplitude},
                  {"bisections", gs.bisections},
                  {"ode_evals", gs.ode_evals},
                  {"tail_start", gs.tail_start}}}};
            write_out(sh, out.dump(2) + "\n");
        } else if (bnd->parsed()) {
            const auto res = ilt::resolvent_p_integral(sh.d, sh.cfg.p, btol);
            nlohmann::json out{{"d", sh.d},
                               {"p", sh.cfg.p},
                               {"resolvent_integral", res.value},
                               {"bound_2_4", ilt::bound_2_4(sh.d, sh.cfg.p, btol)},
                               {"gamma_lower_1_14", ilt::gamma_lower_bound_1_14(sh.d, sh.cfg.p, btol)},
                               {"error_estimates",
                                {{"quadrature_error", res.error}, {"evals", res.evals}}}};
            write_out(sh, out.dump(2) + "\n");
        } else if (tail->parsed()) {
            const auto law = load_law(sh);
            if (sh.cfg.lambda_grid.empty()) sh.cfg.lambda_grid = {0.5, 1.0, 1.5, 2.0, 2.5};
            const auto curve = ilt::run_tail_curve(law, sh.cfg, rates_for(law, sh.cfg.p));
            ilt::emit(ilt::tail_table(curve), sh.cfg);
        } else if (lil->parsed()) {
            const auto law = load_law(sh);
            const auto trace = ilt::run_lil_trace(law, sh.cfg, rates_for(law, sh.cfg.p));
            ilt::emit(ilt::lil_table(trace), sh.cfg);
        }
    } catch (const ilt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
            case ilt::errc::no_convergence:
            case ilt::errc::residual_too_large:
            case ilt::errc::budget_exceeded:
                return 3;
            default:
                return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
