#ifndef POLYSIEVE_MODARITH_HPP
#define POLYSIEVE_MODARITH_HPP

#include <complex>
#include <utility>
#include <vector>

#include "polysieve/int128.hpp"

namespace polysieve {

// A residue class value mod modulus, kept normalized to [0, modulus).
struct Residue {
    i64 value = 0;
    i64 modulus = 1;

    Residue() = default;
    Residue(i64 v, i64 m);
};

// rho = u * v * w^2 split by prime-exponent parity: exponent 1 -> u,
// odd exponent >= 3 -> v, the remaining square -> w^2. v | w always.
struct UvwSplit {
    i64 u = 1;
    i64 v = 1;
    i64 w = 1;
};

struct CrtLift {
    Residue combined;
    // Bezout cofactors with m1*cof1 + m2*cof2 = 1.
    i64 cof1 = 0;
    i64 cof2 = 0;
};

struct Egcd {
    i64 g, x, y;  // g = a*x + b*y, g >= 0
};

bool is_prime(i64 n);
std::vector<i64> primes_up_to(i64 limit);
std::vector<std::pair<i64, int>> factorize(i64 n);

Egcd extended_gcd(i64 a, i64 b);
i64 mod_reduce(i128 a, i64 m);        // representative in [0, m)
i64 mod_pow(i64 base, i64 exp, i64 m);
i64 mod_inverse(i64 a, i64 m);        // throws if gcd(a, m) != 1

// e^{2*pi*i*num/mod}; well-defined on residues mod `mod`.
std::complex<double> unit_phase(i64 num, i64 mod);

// Quadratic residue symbol (a/p) for an odd prime p, via Euler's criterion.
int legendre(i64 a, i64 p);

// Number of x mod `modulus` with poly(x) = 0, for a prime-power modulus.
// Coefficients are leading-first (constant term last). Moduli up to 10^6
// are enumerated; larger prime powers are lifted digit by digit from the
// base prime (which must itself be <= 10^6).
i64 count_roots_mod(const std::vector<i64>& coeffs, i64 modulus);
i64 count_roots_enumerate(const std::vector<i64>& coeffs, i64 modulus);
i64 count_roots_lift(const std::vector<i64>& coeffs, i64 p, int k);

// Sum of e_p(M x) over units x mod p: p-1 when p | M, else -1.
i64 ramanujan_sum(i64 p, i64 M);

// Closed form for sum_x e_p(ell x^2 + m x): eps_p sqrt(p) (ell/p)
// e_p(-(4 ell)^{-1} m^2), eps_p = 1 for p = 1 mod 4 and i for p = 3 mod 4.
std::complex<double> gauss_sum_closed(i64 p, i64 ell, i64 m);
// Companion evaluator by direct summation; must agree with the closed form.
std::complex<double> gauss_sum_direct(i64 p, i64 ell, i64 m);

UvwSplit decompose_uvw(i64 rho);

CrtLift crt_lift(const Residue& r1, const Residue& r2);

}  // namespace polysieve

#endif
