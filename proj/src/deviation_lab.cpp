#include "ilt/deviation_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <thread>

#include "ilt/errors.hpp"
#include "ilt/intersection.hpp"
#include "ilt/walk.hpp"

namespace ilt {

void ExperimentConfig::validate() const {
    if (p < 1 || p > 8) fail(errc::config_invalid, "p out of range [1, 8]");
    if (n < 1) fail(errc::config_invalid, "horizon n must be >= 1");
    if (replicas < 1) fail(errc::config_invalid, "replicas must be >= 1");
    for (std::size_t i = 1; i < lambda_grid.size(); ++i)
        if (!(lambda_grid[i] > lambda_grid[i - 1]))
            fail(errc::config_invalid, "lambda grid must be strictly increasing");
    if (lil_rho <= 1.0) fail(errc::config_invalid, "lil schedule ratio must exceed 1");
    if (format != "csv" && format != "json")
        fail(errc::config_invalid, "format must be csv or json");
    // b_n -> infinity, b_n / n -> 0: checked numerically at the probed endpoint
    if (!(b_of(n) >= 1.0) || !(b_of(n) / double(n) < 1.0))
        fail(errc::config_invalid, "b_n rule violates (2.5) at the horizon");
}

double ExperimentConfig::b_of(std::int64_t m) const {
    return std::max(1.0, std::log(std::log(double(m))));
}

namespace {

int worker_count(std::int64_t jobs) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("ILT_THREADS")) {
        const long cap = std::atol(env);
        if (cap >= 1 && (unsigned long)cap < hw) hw = unsigned(cap);
    }
    return int(std::min<std::int64_t>(hw, jobs));
}

ReplicaSample one_replica(const StepLaw& law, const ExperimentConfig& cfg,
                          std::int64_t replica) {
    std::vector<LocalTimeField> fields;
    fields.reserve(std::size_t(cfg.p));
    for (int j = 0; j < cfg.p; ++j) {
        const auto path =
            sample_path(law, cfg.n, cfg.seed, std::uint64_t(replica) * cfg.p + j);
        fields.push_back(local_time_field(path));
    }
    ReplicaSample s;
    s.replica = replica;
    s.i_n = intersection_count(fields);
    s.j_n = range_intersection(fields);
    return s;
}

} // namespace

std::vector<ReplicaSample> run_replicas(const StepLaw& law, const ExperimentConfig& cfg,
                                        std::int64_t lo, std::int64_t hi) {
    cfg.validate();
    if (lo < 0 || hi < lo) fail(errc::config_invalid, "bad replica range");
    std::vector<ReplicaSample> out(std::size_t(hi - lo));
    const int workers = worker_count(hi - lo);
    if (workers <= 1) {
        for (std::int64_t r = lo; r < hi; ++r) out[std::size_t(r - lo)] = one_replica(law, cfg, r);
        return out;
    }
    std::atomic<std::int64_t> next{lo};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t r = next.fetch_add(1);
                if (r >= hi) return;
                out[std::size_t(r - lo)] = one_replica(law, cfg, r);
            }
        });
    for (auto& t : pool) t.join();
    return out;
}

MomentTable pool_moments(const ExperimentConfig& cfg, const std::vector<int>& ms,
                         std::span<const ReplicaSample> samples) {
    std::vector<ReplicaSample> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const ReplicaSample& a, const ReplicaSample& b) { return a.replica < b.replica; });
    const std::int64_t rep = std::int64_t(sorted.size());
    MomentTable table;
    for (int m : ms) {
        if (m < 1) fail(errc::config_invalid, "moment order must be >= 1");
        double mean = 0;
        std::vector<double> vals(sorted.size());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            double v = 1;
            for (int j = 0; j < m; ++j) v *= double(sorted[i].i_n);
            vals[i] = v;
            mean += v;
        }
        mean /= double(rep);
        MomentEntry entry;
        entry.value = mean;
        entry.replicas = rep;
        entry.method = "monte-carlo";
        if (rep > 1) {
            // jackknife stderr of the mean (equals the classical formula here)
            double ss = 0;
            for (double v : vals) ss += (v - mean) * (v - mean);
            entry.stderr_ = std::sqrt(ss / (double(rep) * double(rep - 1)));
        } else {
            entry.stderr_ = std::numeric_limits<double>::quiet_NaN();
        }
        table.insert(MomentKey{cfg.law, cfg.n, m, cfg.p, "monte-carlo"}, entry);
    }
    return table;
}

MomentTable run_mc_moments(const StepLaw& law, const ExperimentConfig& cfg,
                           const std::vector<int>& ms) {
    const auto samples = run_replicas(law, cfg, 0, cfg.replicas);
    return pool_moments(cfg, ms, samples);
}

TailCurve run_tail_curve(const StepLaw& law, const ExperimentConfig& cfg,
                         const RateConstants& rc) {
    cfg.validate();
    if (cfg.lambda_grid.empty()) fail(errc::config_invalid, "tail curve needs a lambda grid");
    const auto samples = run_replicas(law, cfg, 0, cfg.replicas);
    const double q = rc.d * (rc.p - 1);
    const double b_n = cfg.b_of(cfg.n);
    const double scale =
        std::pow(double(cfg.n), (2 * rc.p - q) / 2.0) * std::pow(b_n, q / 2.0);
    TailCurve curve;
    curve.moderate_coeff = rc.moderate_coeff;
    for (double lambda : cfg.lambda_grid) {
        TailRow row;
        row.lambda = lambda;
        row.n = cfg.n;
        row.b_n = b_n;
        row.threshold = lambda * scale;
        row.trials = std::int64_t(samples.size());
        for (const auto& s : samples)
            if (double(s.i_n) >= row.threshold) ++row.hits;
        row.p_hat = double(row.hits) / double(row.trials);
        row.log_p_hat_over_b =
            row.hits > 0 ? std::log(row.p_hat) / b_n : -std::numeric_limits<double>::infinity();
        row.theory = -rc.moderate_coeff * std::pow(lambda, 2.0 / q);
        curve.rows.push_back(row);
    }
    return curve;
}

LilTrace run_lil_trace(const StepLaw& law, const ExperimentConfig& cfg,
                       const RateConstants& rc) {
    cfg.validate();
    // checkpoints start at the first horizon with log log n >= 1; below that
    // the normalization is vacuous and the statistic is pure noise
    std::vector<std::int64_t> checkpoints;
    for (std::int64_t nk = std::min<std::int64_t>(cfg.n, 16); nk <= cfg.n;
         nk = std::max(nk + 1, std::int64_t(std::ceil(double(nk) * cfg.lil_rho))))
        checkpoints.push_back(nk);

    const double q = rc.d * (rc.p - 1);
    LilTrace trace;
    trace.reference = rc.lil_walk;
    std::vector<std::vector<LilRow>> per_replica(std::size_t(cfg.replicas));

    const int workers = worker_count(cfg.replicas);
    std::atomic<std::int64_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::int64_t r = next.fetch_add(1);
            if (r >= cfg.replicas) return;
            std::vector<WalkPath> paths;
            for (int j = 0; j < cfg.p; ++j)
                paths.push_back(sample_path(law, cfg.n, cfg.seed, std::uint64_t(r) * cfg.p + j));
            const auto profile = intersection_profile(paths);
            double running = 0;
            std::vector<LilRow>& rows = per_replica[std::size_t(r)];
            for (std::size_t k = 0; k < checkpoints.size(); ++k) {
                const std::int64_t nk = checkpoints[k];
                LilRow row;
                row.replica = r;
                row.k = std::int64_t(k);
                row.n_k = nk;
                row.i_n = profile[std::size_t(nk - 1)];
                const double ll = std::log(std::log(double(nk)));
                row.statistic = ll > 0 ? double(row.i_n) / (std::pow(double(nk), (2 * rc.p - q) / 2.0) *
                                                            std::pow(ll, q / 2.0))
                                       : 0.0;
                running = std::max(running, row.statistic);
                row.running_max = running;
                rows.push_back(row);
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (const auto& rows : per_replica)
        trace.rows.insert(trace.rows.end(), rows.begin(), rows.end());
    return trace;
}

Table replica_table(const ExperimentConfig& cfg, std::span<const ReplicaSample> samples) {
    Table t;
    t.columns = {"replica", "n", "p", "law", "i_n", "j_n"};
    for (const auto& s : samples)
        t.add_row({format_int(s.replica), format_int(cfg.n), format_int(cfg.p), cfg.law,
                   format_int(s.i_n), format_int(s.j_n)});
    return t;
}

Table moments_table(const MomentTable& table) {
    Table t;
    t.columns = {"n", "m", "p", "law", "method", "value", "stderr"};
    for (const auto& [key, entry] : table.entries())
        t.add_row({format_int(key.n), format_int(key.m), format_int(key.p), key.law, entry.method,
                   format_double(entry.value),
                   std::isnan(entry.stderr_) ? "" : format_double(entry.stderr_)});
    return t;
}

Table tail_table(const TailCurve& curve) {
    Table t;
    // ASCII transliterations of the paper's symbols (lambda, p_hat)
    t.columns = {"lambda", "n",     "b_n",   "threshold",        "hits",
                 "trials", "p_hat", "log_p_hat_over_b", "theory"};
    for (const auto& r : curve.rows)
        t.add_row({format_double(r.lambda), format_int(r.n), format_double(r.b_n),
                   format_double(r.threshold), format_int(r.hits), format_int(r.trials),
                   format_double(r.p_hat), format_double(r.log_p_hat_over_b),
                   format_double(r.theory)});
    return t;
}

Table lil_table(const LilTrace& trace) {
    Table t;
    t.columns = {"replica", "k", "n_k", "i_n", "statistic", "running_max", "reference"};
    for (const auto& r : trace.rows)
        t.add_row({format_int(r.replica), format_int(r.k), format_int(r.n_k), format_int(r.i_n),
                   format_double(r.statistic), format_double(r.running_max),
                   format_double(trace.reference)});
    return t;
}

std::string render(const Table& t, const std::string& format) {
    if (format == "csv") return to_csv(t);
    if (format == "json") return to_json_rows(t);
    fail(errc::config_invalid, "format must be csv or json");
}

void emit(const Table& t, const ExperimentConfig& cfg) {
    const std::string text = render(t, cfg.format);
    if (cfg.out.empty())
        std::cout << text;
    else
        write_text_file(cfg.out, text);
}

} // namespace ilt
