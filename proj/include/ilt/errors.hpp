#pragma once

#include <stdexcept>
#include <string>

namespace ilt {

enum class errc {
    not_symmetric,
    probabilities_not_normalized,
    degenerate_support,
    mismatched_horizons,
    mismatched_config,
    box_too_large,
    budget_exceeded,
    missing_moment,
    condition_violated,
    no_convergence,
    residual_too_large,
    config_invalid,
    io_error,
};

// Single exception type carrying a machine-readable code; the CLI maps
// config_invalid-style codes to exit 2 and no_convergence to exit 3.
class Error : public std::runtime_error {
public:
    Error(errc c, const std::string& what) : std::runtime_error(what), code_(c) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw Error(c, msg); }

} // namespace ilt
