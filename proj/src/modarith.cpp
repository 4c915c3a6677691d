#include "polysieve/modarith.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "polysieve/rational.hpp"

namespace polysieve {

namespace {
constexpr i64 kEnumerationCap = 1'000'000;  // enumeration/lifting threshold
constexpr i64 kTrialDivisionCap = 1'000'000;
}  // namespace

Residue::Residue(i64 v, i64 m) {
    if (m < 1) throw std::invalid_argument("Residue: modulus must be >= 1");
    modulus = m;
    value = mod_reduce(v, m);
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    if (n > kTrialDivisionCap * kTrialDivisionCap)
        throw std::invalid_argument("is_prime: beyond trial-division range");
    for (i64 d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

std::vector<i64> primes_up_to(i64 limit) {
    std::vector<i64> out;
    if (limit < 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (i64 p = 2; p <= limit; ++p) {
        if (composite[static_cast<std::size_t>(p)]) continue;
        out.push_back(p);
        for (i64 q = p * p; q <= limit; q += p) composite[static_cast<std::size_t>(q)] = true;
    }
    return out;
}

std::vector<std::pair<i64, int>> factorize(i64 n) {
    if (n < 1) throw std::invalid_argument("factorize: argument must be positive");
    std::vector<std::pair<i64, int>> out;
    for (i64 d = 2; d * d <= n; d == 2 ? d = 3 : d += 2) {
        if (d > kTrialDivisionCap)
            throw std::invalid_argument("factorize: beyond trial-division range");
        if (n % d != 0) continue;
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

Egcd extended_gcd(i64 a, i64 b) {
    i64 old_r = a, r = b;
    i64 old_x = 1, x = 0;
    i64 old_y = 0, y = 1;
    while (r != 0) {
        i64 q = old_r / r;
        i64 t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_x - q * x;
        old_x = x;
        x = t;
        t = old_y - q * y;
        old_y = y;
        y = t;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_x = -old_x;
        old_y = -old_y;
    }
    return {old_r, old_x, old_y};
}

i64 mod_reduce(i128 a, i64 m) {
    if (m < 1) throw std::invalid_argument("mod_reduce: modulus must be >= 1");
    i128 r = a % m;
    if (r < 0) r += m;
    return static_cast<i64>(r);
}

i64 mod_pow(i64 base, i64 exp, i64 m) {
    if (exp < 0) throw std::invalid_argument("mod_pow: negative exponent");
    i64 b = mod_reduce(base, m);
    i64 acc = 1 % m;
    while (exp > 0) {
        if (exp & 1) acc = mod_reduce(static_cast<i128>(acc) * b, m);
        b = mod_reduce(static_cast<i128>(b) * b, m);
        exp >>= 1;
    }
    return acc;
}

i64 mod_inverse(i64 a, i64 m) {
    Egcd e = extended_gcd(mod_reduce(a, m), m);
    if (e.g != 1) throw std::invalid_argument("mod_inverse: argument not coprime to modulus");
    return mod_reduce(e.x, m);
}

std::complex<double> unit_phase(i64 num, i64 mod) {
    i64 r = mod_reduce(num, mod);
    double theta = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(mod);
    return {std::cos(theta), std::sin(theta)};
}

int legendre(i64 a, i64 p) {
    if (p == 2 || !is_prime(p)) throw std::invalid_argument("legendre: p must be an odd prime");
    i64 r = mod_pow(a, (p - 1) / 2, p);
    if (r == 0) return 0;
    return r == 1 ? 1 : -1;
}

namespace {

i64 horner_mod(const std::vector<i64>& reduced, i64 x, i64 m) {
    i64 acc = 0;
    for (i64 c : reduced) acc = mod_reduce(static_cast<i128>(acc) * x + c, m);
    return acc;
}

std::vector<i64> reduce_coeffs(const std::vector<i64>& coeffs, i64 m) {
    std::vector<i64> out(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) out[i] = mod_reduce(coeffs[i], m);
    return out;
}

bool all_zero(const std::vector<i64>& v) {
    for (i64 c : v)
        if (c != 0) return false;
    return true;
}

std::vector<BigInt> to_big(const std::vector<i64>& v) {
    return std::vector<BigInt>(v.begin(), v.end());
}

// Count t mod p^k with poly(t) = 0 mod p^k, recursively peeling one base-p
// digit per level. Coefficients are exact integers so the shift/divide
// steps cannot lose information.
i64 lift_count(std::vector<BigInt> coeffs, i64 p, int k) {
    if (k == 0) return 1;
    BigInt pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    bool zero = true;
    for (auto& c : coeffs) {
        c %= pk;
        if (c < 0) c += pk;
        if (c != 0) zero = false;
    }
    if (zero) return static_cast<i64>(pk);

    auto eval_mod_p = [&](i64 x) {
        BigInt acc = 0;
        for (const BigInt& c : coeffs) acc = (acc * x + c) % p;
        return static_cast<i64>(acc < 0 ? acc + p : acc);
    };
    std::vector<i64> base_roots;
    for (i64 x = 0; x < p; ++x)
        if (eval_mod_p(x) == 0) base_roots.push_back(x);
    if (k == 1) return static_cast<i64>(base_roots.size());

    const std::size_t n = coeffs.size();
    i64 total = 0;
    for (i64 r : base_roots) {
        // poly(r + p t): expand in t; every coefficient is divisible by p.
        std::vector<BigInt> shifted(n, 0);
        // Horner on (p t + r): acc(t) = acc(t) * (p t + r) + c_i.
        std::vector<BigInt> acc(1, 0);
        for (const BigInt& c : coeffs) {
            std::vector<BigInt> next(acc.size() + 1, 0);
            for (std::size_t j = 0; j < acc.size(); ++j) {
                next[j + 1] += acc[j] * p;   // degree bumps by one
                next[j] += acc[j] * r;
            }
            next[0] += c;
            acc.swap(next);
        }
        // acc holds coefficients with acc[j] multiplying t^j; convert to
        // leading-first and divide out the common factor p.
        std::vector<BigInt> g(acc.rbegin(), acc.rend());
        for (auto& c : g) {
            c /= p;  // exact: constant term is poly(r) = 0 mod p, t^j terms carry p^j
        }
        total += lift_count(std::move(g), p, k - 1);
    }
    return total;
}

}  // namespace

i64 count_roots_enumerate(const std::vector<i64>& coeffs, i64 modulus) {
    if (modulus < 1) throw std::invalid_argument("count_roots: modulus must be >= 1");
    std::vector<i64> red = reduce_coeffs(coeffs, modulus);
    if (all_zero(red)) return modulus;
    i64 count = 0;
    for (i64 x = 0; x < modulus; ++x)
        if (horner_mod(red, x, modulus) == 0) ++count;
    return count;
}

i64 count_roots_lift(const std::vector<i64>& coeffs, i64 p, int k) {
    if (k < 0) throw std::invalid_argument("count_roots_lift: negative exponent");
    if (p > kEnumerationCap)
        throw std::invalid_argument("count_roots_lift: base prime beyond enumeration range");
    return lift_count(to_big(coeffs), p, k);
}

i64 count_roots_mod(const std::vector<i64>& coeffs, i64 modulus) {
    if (modulus < 1) throw std::invalid_argument("count_roots_mod: modulus must be >= 1");
    if (modulus == 1) return 1;
    if (modulus <= kEnumerationCap) return count_roots_enumerate(coeffs, modulus);
    auto fac = factorize(modulus);
    if (fac.size() != 1)
        throw std::invalid_argument("count_roots_mod: modulus must be a prime power");
    return count_roots_lift(coeffs, fac[0].first, fac[0].second);
}

i64 ramanujan_sum(i64 p, i64 M) {
    if (!is_prime(p)) throw std::invalid_argument("ramanujan_sum: p must be prime");
    return mod_reduce(M, p) == 0 ? p - 1 : -1;
}

std::complex<double> gauss_sum_closed(i64 p, i64 ell, i64 m) {
    if (p == 2 || !is_prime(p)) throw std::invalid_argument("gauss_sum: p must be an odd prime");
    if (mod_reduce(ell, p) == 0) throw std::invalid_argument("gauss_sum: p divides ell");
    std::complex<double> eps =
        (p % 4 == 1) ? std::complex<double>(1.0, 0.0) : std::complex<double>(0.0, 1.0);
    double root = std::sqrt(static_cast<double>(p));
    int chi = legendre(ell, p);
    i64 inv4ell = mod_inverse(mod_reduce(static_cast<i128>(4) * ell, p), p);
    i64 arg = mod_reduce(-static_cast<i128>(inv4ell) * mod_reduce(static_cast<i128>(m) * m, p), p);
    return eps * root * static_cast<double>(chi) * unit_phase(arg, p);
}

std::complex<double> gauss_sum_direct(i64 p, i64 ell, i64 m) {
    if (p == 2 || !is_prime(p)) throw std::invalid_argument("gauss_sum: p must be an odd prime");
    if (mod_reduce(ell, p) == 0) throw std::invalid_argument("gauss_sum: p divides ell");
    std::complex<double> acc{0.0, 0.0};
    for (i64 x = 0; x < p; ++x) {
        i64 arg = mod_reduce(static_cast<i128>(ell) * x * x + static_cast<i128>(m) * x, p);
        acc += unit_phase(arg, p);
    }
    return acc;
}

UvwSplit decompose_uvw(i64 rho) {
    if (rho < 1) throw std::invalid_argument("decompose_uvw: rho must be positive");
    UvwSplit out;
    for (auto [p, e] : factorize(rho)) {
        if (e == 1) {
            out.u *= p;
        } else if (e % 2 == 1) {
            out.v *= p;
            for (int i = 0; i < (e - 1) / 2; ++i) out.w *= p;
        } else {
            for (int i = 0; i < e / 2; ++i) out.w *= p;
        }
    }
    return out;
}

CrtLift crt_lift(const Residue& r1, const Residue& r2) {
    Egcd e = extended_gcd(r1.modulus, r2.modulus);
    if (e.g != 1) throw std::invalid_argument("crt_lift: moduli are not coprime");
    i128 m = static_cast<i128>(r1.modulus) * r2.modulus;
    if (m > static_cast<i128>(INT64_MAX))
        throw std::invalid_argument("crt_lift: combined modulus overflows");
    // x = r1 + m1 * ((r2 - r1) * inv(m1) mod m2)
    i64 inv_m1 = mod_reduce(e.x, r2.modulus);
    i64 k = mod_reduce(static_cast<i128>(mod_reduce(static_cast<i128>(r2.value) - r1.value,
                                                    r2.modulus)) *
                           inv_m1,
                       r2.modulus);
    i64 x = mod_reduce(static_cast<i128>(r1.value) + static_cast<i128>(r1.modulus) * k,
                       static_cast<i64>(m));
    return {Residue(x, static_cast<i64>(m)), e.x, e.y};
}

}  // namespace polysieve
