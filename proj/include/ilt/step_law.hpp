#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ilt/lattice.hpp"
#include "ilt/rational.hpp"
#include "ilt/rng.hpp"

namespace ilt {

enum class AperiodicHint { yes, no, unknown };

// Symmetric lattice increment distribution with exact rational probabilities.
// Immutable after construction; shareable across threads.
class StepLaw {
public:
    // Validates symmetry, normalization and rank-d span, derives the
    // covariance matrix and the sampling table. Full generation of Z^d by
    // the support is a caller obligation (only the rank-d span is checked).
    static StepLaw build(int d, std::vector<std::pair<Point, Rational>> support,
                         std::string name = "custom");

    // Simple random walk: 2d unit neighbors, probability 1/(2d) each.
    static StepLaw srw(int d);

    // "srw2" / "srw3" by name, anything else is a config error.
    static StepLaw builtin(const std::string& name);

    // Structured text config: "d <dim>" line, then one "<c1> ... <cd> <prob>"
    // line per support point. '#' starts a comment.
    static StepLaw from_config(std::istream& in, std::string name = "file");
    static StepLaw from_config_file(const std::string& path);

    int dim() const { return d_; }
    const std::string& name() const { return name_; }
    const std::vector<std::pair<Point, Rational>>& support() const { return support_; }

    // Covariance Gamma = sum q(x) x x^T, row-major d x d, exact.
    const std::vector<Rational>& covariance() const { return cov_; }
    const Rational& det_covariance() const { return det_cov_; }

    AperiodicHint aperiodic_hint() const { return aperiodic_hint_; }

    // Largest |coordinate| over the support, per dimension and overall.
    int max_step() const { return max_step_; }

    // One increment, drawn exactly from the rational law.
    Point sample(StreamRng& rng) const;

private:
    StepLaw() = default;

    int d_ = 0;
    std::string name_;
    std::vector<std::pair<Point, Rational>> support_;
    std::vector<Rational> cov_;
    Rational det_cov_;
    AperiodicHint aperiodic_hint_ = AperiodicHint::unknown;
    int max_step_ = 0;

    // exact sampling: cumulative integer weights over a common denominator
    std::uint64_t weight_total_ = 0;
    std::vector<std::uint64_t> weight_cum_;
};

} // namespace ilt
