#ifndef LECH_RATIONAL_HPP
#define LECH_RATIONAL_HPP

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace lech {

// Exact rational arithmetic for multiplicity estimates.  Lengths stay far
// below 2^40 at desk scale, so 64-bit components are plenty.
using Rational = boost::rational<std::int64_t>;

inline Rational rat(std::int64_t num, std::int64_t den = 1) { return Rational(num, den); }

inline Rational rat_abs(const Rational& r) { return r < 0 ? -r : r; }

// Serialized as "num/den", always normalized with a positive denominator.
inline std::string to_string(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline std::int64_t ipow(std::int64_t base, std::uint32_t exp) {
    std::int64_t out = 1;
    for (std::uint32_t i = 0; i < exp; ++i) out *= base;
    return out;
}

inline std::int64_t factorial(std::uint32_t n) {
    std::int64_t out = 1;
    for (std::uint32_t i = 2; i <= n; ++i) out *= i;
    return out;
}

} // namespace lech

#endif
