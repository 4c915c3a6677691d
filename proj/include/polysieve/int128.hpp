#ifndef POLYSIEVE_INT128_HPP
#define POLYSIEVE_INT128_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace polysieve {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

// Checked 128-bit arithmetic. Evaluations that leave the signed 128-bit
// range are a hard error, never a silent wrap.
inline i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("int128 overflow in addition");
    return r;
}

inline i128 checked_sub(i128 a, i128 b) {
    i128 r;
    if (__builtin_sub_overflow(a, b, &r))
        throw std::overflow_error("int128 overflow in subtraction");
    return r;
}

inline i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("int128 overflow in multiplication");
    return r;
}

inline i128 abs128(i128 x) { return x < 0 ? -x : x; }

// gcd, normalized nonnegative; gcd(0,0) = 0 (callers treat it as a
// degenerate "vanishing" marker).
inline i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline i64 gcd64(i64 a, i64 b) { return static_cast<i64>(gcd128(a, b)); }

inline std::string to_string_i128(i128 x) {
    if (x == 0) return "0";
    bool neg = x < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(x + 1)) + 1
                              : static_cast<unsigned __int128>(x);
    std::string s;
    while (u > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    return std::string(s.rbegin(), s.rend());
}

inline i128 parse_i128(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = (s[0] == '-');
        i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("bad integer literal: " + s);
    i128 v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9')
            throw std::invalid_argument("bad integer literal: " + s);
        v = checked_add(checked_mul(v, 10), s[i] - '0');
    }
    return neg ? -v : v;
}

}  // namespace polysieve

#endif
