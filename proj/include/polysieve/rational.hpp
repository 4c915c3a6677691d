#ifndef POLYSIEVE_RATIONAL_HPP
#define POLYSIEVE_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "polysieve/int128.hpp"

namespace polysieve {

// Exact arithmetic used by the sieve and counting layers. Everything that
// claims exact equality is computed in these types; no floating point.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt to_bigint(i128 x) {
    bool neg = x < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(x + 1)) + 1
                              : static_cast<unsigned __int128>(x);
    BigInt hi = static_cast<u64>(u >> 64);
    BigInt lo = static_cast<u64>(u);
    BigInt v = (hi << 64) | lo;
    return neg ? BigInt(-v) : v;
}

// Serialized form used by every JSON/CSV artifact: "num/den" in lowest
// terms, denominator omitted when it is 1.
inline std::string rational_to_string(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    return Rational(num, den);
}

}  // namespace polysieve

#endif
