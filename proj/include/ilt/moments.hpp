#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ilt/kernel_table.hpp"

namespace ilt {

// One moment value E I_n^m together with how it was obtained. Exact entries
// carry the rational; Monte Carlo entries carry a jackknife stderr.
struct MomentEntry {
    double value = 0;
    double stderr_ = 0;
    std::int64_t replicas = 0;
    std::string method; // exact-formula | brute-force | monte-carlo
    std::optional<Rational> exact;

    static MomentEntry from_exact(Rational v, std::string method = "exact-formula") {
        MomentEntry e;
        e.exact = v;
        e.value = to_double(v);
        e.method = std::move(method);
        return e;
    }
};

struct MomentKey {
    std::string law;
    std::int64_t n = 0;
    int m = 0;
    int p = 0;
    std::string method;
    bool operator==(const MomentKey&) const = default;
};

class MomentTable {
public:
    void insert(MomentKey key, MomentEntry entry);
    const MomentEntry* find(const MomentKey& key) const;
    const std::vector<std::pair<MomentKey, MomentEntry>>& entries() const { return entries_; }

private:
    std::vector<std::pair<MomentKey, MomentEntry>> entries_;
};

// E I_n = sum_x (sum_{i=1}^n P^i(x))^p, exact on the reachable box.
Rational expected_In_exact(const StepLaw& law, int n, int p,
                           std::int64_t max_cells = 80'000'000);

// Same quantity in extended precision, for horizons where rationals are
// unaffordable.
long double expected_In_float(const StepLaw& law, int n, int p,
                              std::int64_t max_cells = 80'000'000);

// E I_n^m by the permutation-sum over ordered visit times. m <= 2 supported;
// higher m is out of budget here (use moment_bruteforce on tiny instances).
Rational moment_exact(const StepLaw& law, int n, int m, int p,
                      std::int64_t max_cells = 80'000'000);

// Full enumeration of all |support|^{p n} joint paths, exact probabilities.
Rational moment_bruteforce(const StepLaw& law, int n, int m, int p,
                           std::int64_t budget = 10'000'000);

// Supplies E I_n^m entries to the inequality checkers; must throw
// Error(errc::missing_moment) when unavailable. m = 0 is handled internally.
using MomentGetter = std::function<MomentEntry(std::int64_t n, int m)>;

struct InequalityReport {
    double lhs = 0;
    double rhs = 0;
    bool holds = false;
};

// Moment inequality over blocks n_1..n_a:
// (E I_{n_1+...+n_a}^m)^{1/p} <= sum over compositions of m of multinomial
// products of (E I_{n_i}^{k_i})^{1/p}. MC inputs get 4-stderr slack.
InequalityReport check_theorem_5_1(const std::vector<std::int64_t>& blocks, int m, int p,
                                   const MomentGetter& getter);

// Truncated exponential-series version, both sides cut at m <= m_star.
InequalityReport check_corollary_5_2(const std::vector<std::int64_t>& blocks, double lambda,
                                     int m_star, int p, const MomentGetter& getter);

} // namespace ilt
