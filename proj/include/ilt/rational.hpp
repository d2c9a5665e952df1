#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "ilt/errors.hpp"

namespace ilt {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Parses "a/b" or "a" (integers, optional sign) into an exact rational.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) fail(errc::config_invalid, "zero denominator in '" + s + "'");
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        fail(errc::config_invalid, "cannot parse rational '" + s + "'");
    }
}

} // namespace ilt
