#include "ilt/step_law.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace ilt {

namespace {

// Integer matrix rank by fraction-free Gaussian elimination.
int integer_rank(std::vector<std::vector<std::int64_t>> rows, int cols) {
    int rank = 0;
    for (int c = 0; c < cols && rank < int(rows.size()); ++c) {
        int pivot = -1;
        for (int r = rank; r < int(rows.size()); ++r)
            if (rows[r][c] != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int r = rank + 1; r < int(rows.size()); ++r) {
            if (rows[r][c] == 0) continue;
            std::int64_t a = rows[rank][c], b = rows[r][c];
            std::int64_t g = std::gcd(a, b);
            for (int k = 0; k < cols; ++k)
                rows[r][k] = rows[r][k] * (a / g) - rows[rank][k] * (b / g);
        }
        ++rank;
    }
    return rank;
}

Rational det_rational(const std::vector<Rational>& m, int d) {
    if (d == 1) return m[0];
    if (d == 2) return m[0] * m[3] - m[1] * m[2];
    if (d == 3)
        return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
    // d == 4: Laplace expansion along the first row
    Rational det = 0;
    for (int j = 0; j < 4; ++j) {
        std::vector<Rational> sub;
        sub.reserve(9);
        for (int r = 1; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                if (c != j) sub.push_back(m[r * 4 + c]);
        Rational minor = det_rational(sub, 3);
        det += ((j % 2) ? -minor : minor) * m[j];
    }
    return det;
}

// gcd of {i <= depth : P^i(0) > 0} via reachability sets; unknown when the
// probe budget runs out or no return happens within depth.
AperiodicHint probe_aperiodicity(const std::vector<std::pair<Point, Rational>>& support, int d,
                                 int depth = 64, std::size_t cell_budget = 2'000'000) {
    std::unordered_set<std::uint64_t> cur;
    cur.insert(pack_point(origin(), d));
    std::int64_t g = 0;
    std::size_t work = 0;
    for (int i = 1; i <= depth; ++i) {
        std::unordered_set<std::uint64_t> next;
        next.reserve(cur.size() * support.size());
        for (auto key : cur) {
            Point x = unpack_point(key, d);
            for (const auto& [s, q] : support) next.insert(pack_point(add(x, s), d));
        }
        work += next.size();
        if (work > cell_budget) return AperiodicHint::unknown;
        if (next.count(pack_point(origin(), d))) {
            g = std::gcd(g, std::int64_t(i));
            if (g == 1) return AperiodicHint::yes;
        }
        cur = std::move(next);
    }
    return g > 1 ? AperiodicHint::no : AperiodicHint::unknown;
}

} // namespace

StepLaw StepLaw::build(int d, std::vector<std::pair<Point, Rational>> support, std::string name) {
    if (d < 1 || d > kMaxDim) fail(errc::config_invalid, "dimension out of range [1,4]");
    if (support.empty()) fail(errc::config_invalid, "empty support");

    StepLaw law;
    law.d_ = d;
    law.name_ = std::move(name);

    Rational total = 0;
    std::unordered_map<std::uint64_t, Rational> by_point;
    for (auto& [x, q] : support) {
        for (int i = d; i < kMaxDim; ++i)
            if (x[i] != 0) fail(errc::config_invalid, "nonzero coordinate beyond dimension");
        if (q <= 0) fail(errc::probabilities_not_normalized, "nonpositive probability");
        auto [it, fresh] = by_point.emplace(pack_point(x, d), q);
        if (!fresh) fail(errc::config_invalid, "duplicate support point");
        total += q;
    }
    if (total != 1) fail(errc::probabilities_not_normalized, "probabilities do not sum to 1");

    for (const auto& [x, q] : support) {
        auto it = by_point.find(pack_point(neg(x), d));
        if (it == by_point.end() || it->second != q)
            fail(errc::not_symmetric, "support is not symmetric under negation");
    }

    std::vector<std::vector<std::int64_t>> rows;
    for (const auto& [x, q] : support) {
        std::vector<std::int64_t> row(d);
        for (int i = 0; i < d; ++i) row[i] = x[i];
        rows.push_back(std::move(row));
    }
    if (integer_rank(std::move(rows), d) < d)
        fail(errc::degenerate_support, "support does not span a rank-d sublattice");

    law.cov_.assign(std::size_t(d) * d, Rational(0));
    for (const auto& [x, q] : support)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) law.cov_[std::size_t(i) * d + j] += q * x[i] * x[j];
    law.det_cov_ = det_rational(law.cov_, d);
    // rank-d span makes sum q x x^T positive definite; keep a cheap sanity check
    if (law.det_cov_ <= 0) fail(errc::degenerate_support, "covariance not positive definite");

    for (const auto& [x, q] : support)
        for (int i = 0; i < d; ++i) law.max_step_ = std::max<int>(law.max_step_, std::abs(x[i]));

    // exact sampling table: integer weights over the common denominator
    BigInt denom_lcm = 1;
    for (const auto& [x, q] : support)
        denom_lcm = boost::multiprecision::lcm(denom_lcm, boost::multiprecision::denominator(q));
    if (denom_lcm > BigInt(std::uint64_t(1) << 62))
        fail(errc::config_invalid, "common probability denominator exceeds sampler range");
    const std::uint64_t L = denom_lcm.convert_to<std::uint64_t>();
    std::uint64_t cum = 0;
    for (const auto& [x, q] : support) {
        Rational w = q * L;
        cum += boost::multiprecision::numerator(w).convert_to<std::uint64_t>();
        law.weight_cum_.push_back(cum);
    }
    law.weight_total_ = L;

    law.support_ = std::move(support);
    law.aperiodic_hint_ = probe_aperiodicity(law.support_, d);
    return law;
}

StepLaw StepLaw::srw(int d) {
    std::vector<std::pair<Point, Rational>> support;
    for (int i = 0; i < d; ++i) {
        Point plus = origin(), minus = origin();
        plus[i] = 1;
        minus[i] = -1;
        support.emplace_back(plus, Rational(1, 2 * d));
        support.emplace_back(minus, Rational(1, 2 * d));
    }
    return build(d, std::move(support), "srw" + std::to_string(d));
}

StepLaw StepLaw::builtin(const std::string& name) {
    if (name == "srw2") return srw(2);
    if (name == "srw3") return srw(3);
    fail(errc::config_invalid, "unknown builtin step law '" + name + "'");
}

StepLaw StepLaw::from_config(std::istream& in, std::string name) {
    int d = -1;
    std::vector<std::pair<Point, Rational>> support;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "d") {
            if (!(ls >> d)) fail(errc::config_invalid, "malformed dimension line");
            continue;
        }
        if (d < 1) fail(errc::config_invalid, "support point before dimension line");
        Point x = origin();
        x[0] = std::int32_t(std::stol(tok));
        for (int i = 1; i < d; ++i) {
            long c;
            if (!(ls >> c)) fail(errc::config_invalid, "truncated support point line");
            x[i] = std::int32_t(c);
        }
        std::string prob;
        if (!(ls >> prob)) fail(errc::config_invalid, "missing probability");
        support.emplace_back(x, parse_rational(prob));
    }
    if (d < 1) fail(errc::config_invalid, "missing dimension line");
    return build(d, std::move(support), std::move(name));
}

StepLaw StepLaw::from_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io_error, "cannot open step-law config '" + path + "'");
    return from_config(in, path);
}

Point StepLaw::sample(StreamRng& rng) const {
    const std::uint64_t r = rng.below(weight_total_);
    auto it = std::upper_bound(weight_cum_.begin(), weight_cum_.end(), r);
    return support_[std::size_t(it - weight_cum_.begin())].first;
}

} // namespace ilt
