#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ilt/ground_state.hpp"
#include "ilt/moments.hpp"
#include "ilt/step_law.hpp"
#include "ilt/table.hpp"

namespace ilt {

struct ExperimentConfig {
    std::string law = "srw2";
    int p = 2;
    std::int64_t n = 0;
    std::int64_t replicas = 1;
    std::uint64_t seed = 1;
    std::vector<double> lambda_grid;
    double lil_rho = 1.5; // geometric checkpoint ratio for LIL runs
    std::string out;      // empty = stdout
    std::string format = "csv";

    void validate() const;

    // b_n = max(1, log log n); (2.5) only constrains asymptotics, the floor
    // guards log log n <= 0 for n < 16.
    double b_of(std::int64_t n) const;
};

// One replica's intersection local time and range, plus provenance. The pair
// (seed, replica) determines the walks; replica r uses streams r*p + j.
struct ReplicaSample {
    std::int64_t replica = 0;
    std::int64_t i_n = 0;
    std::int64_t j_n = 0;
};

// Replicas [lo, hi), replica-parallel (capped by ILT_THREADS), results in
// replica order regardless of thread count.
std::vector<ReplicaSample> run_replicas(const StepLaw& law, const ExperimentConfig& cfg,
                                        std::int64_t lo, std::int64_t hi);

// Pool raw samples into E I_n^m estimates (mean, jackknife stderr). Samples
// are sorted by replica id first so batch order never matters. replicas = 1
// leaves stderr NaN.
MomentTable pool_moments(const ExperimentConfig& cfg, const std::vector<int>& ms,
                         std::span<const ReplicaSample> samples);

MomentTable run_mc_moments(const StepLaw& law, const ExperimentConfig& cfg,
                           const std::vector<int>& ms);

struct TailRow {
    double lambda = 0;
    std::int64_t n = 0;
    double b_n = 0;
    double threshold = 0; // lambda * n^{(2p-q)/2} * b_n^{q/2}
    std::int64_t hits = 0;
    std::int64_t trials = 0;
    double p_hat = 0;
    double log_p_hat_over_b = 0;
    double theory = 0; // -moderate_coeff * lambda^{2/q}
};

struct TailCurve {
    std::vector<TailRow> rows;
    double moderate_coeff = 0;
};

// Pooled nested-event exceedance counts over one set of samples: the same
// replicas are tested against every lambda, so p_hat is exactly nonincreasing.
TailCurve run_tail_curve(const StepLaw& law, const ExperimentConfig& cfg,
                         const RateConstants& rc);

struct LilRow {
    std::int64_t replica = 0;
    std::int64_t k = 0;   // checkpoint index
    std::int64_t n_k = 0;
    std::int64_t i_n = 0;
    double statistic = 0; // I_n / (n^{(2p-q)/2} (log log n)^{q/2})
    double running_max = 0;
};

struct LilTrace {
    std::vector<LilRow> rows;
    double reference = 0; // lil_walk constant
};

// Geometric checkpoint schedule n_{k+1} = ceil(rho n_k) up to cfg.n; one
// incremental profile pass per replica.
LilTrace run_lil_trace(const StepLaw& law, const ExperimentConfig& cfg,
                       const RateConstants& rc);

Table replica_table(const ExperimentConfig& cfg, std::span<const ReplicaSample> samples);
Table moments_table(const MomentTable& table);
Table tail_table(const TailCurve& curve);
Table lil_table(const LilTrace& trace);

// Render per cfg.format and write to cfg.out (stdout when empty).
std::string render(const Table& t, const std::string& format);
void emit(const Table& t, const ExperimentConfig& cfg);

} // namespace ilt
