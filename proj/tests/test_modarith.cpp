#include <doctest.h>

#include <complex>
#include <random>

#include "polysieve/modarith.hpp"

using namespace polysieve;

namespace {

// Independent oracle: count square roots by enumeration.
i64 sqrt_count(i64 a, i64 p) {
    i64 n = 0;
    for (i64 x = 0; x < p; ++x)
        if (((x * x - a) % p + p) % p == 0) ++n;
    return n;
}

}  // namespace

TEST_CASE("legendre symbol frozen values") {
    CHECK(legendre(2, 7) == 1);   // squares mod 7 are {1, 2, 4}
    CHECK(legendre(0, 5) == 0);
    CHECK(legendre(3, 7) == -1);
    CHECK_THROWS_AS(legendre(3, 2), std::invalid_argument);
    CHECK_THROWS_AS(legendre(3, 15), std::invalid_argument);
}

TEST_CASE("legendre matches root counting for all p <= 97") {
    for (i64 p : primes_up_to(97)) {
        if (p == 2) continue;
        for (i64 a = 0; a < p; ++a) {
            if (a % p == 0) {
                CHECK(legendre(a, p) == 0);
            } else {
                CHECK(legendre(a, p) == sqrt_count(a, p) - 1);
            }
        }
    }
}

TEST_CASE("count_roots_mod frozen examples") {
    CHECK(count_roots_mod({1, 0, -2}, 7) == 2);   // roots 3 and 4
    CHECK(count_roots_mod({1, 0, 0}, 9) == 3);    // roots 0, 3, 6
    CHECK(count_roots_mod({5}, 49) == 0);         // nonzero constant
    CHECK(count_roots_mod({7}, 7) == 7);          // zero polynomial mod 7
    CHECK(count_roots_mod({1, 2, 3}, 1) == 1);
    CHECK_THROWS_AS(count_roots_lift({1, 0, -2}, 2000003, 1), std::invalid_argument);
}

TEST_CASE("enumeration and lifting agree on randomized cubics, p^k <= 10^4") {
    std::mt19937 rng(20240911);
    std::uniform_int_distribution<i64> coeff(-50, 50);
    for (i64 p : {2, 3, 5, 7, 11, 13, 19, 31, 97}) {
        for (int k = 1;; ++k) {
            i64 pk = 1;
            for (int e = 0; e < k; ++e) pk *= p;
            if (pk > 10000) break;
            for (int trial = 0; trial < 12; ++trial) {
                std::vector<i64> poly{coeff(rng), coeff(rng), coeff(rng), coeff(rng)};
                CAPTURE(p);
                CAPTURE(k);
                CHECK(count_roots_enumerate(poly, pk) == count_roots_lift(poly, p, k));
            }
        }
    }
}

TEST_CASE("ramanujan sums") {
    CHECK(ramanujan_sum(7, 14) == 6);
    CHECK(ramanujan_sum(7, 3) == -1);
    CHECK(ramanujan_sum(5, 0) == 4);
    // Direct-summation oracle over units.
    for (i64 p : {3, 5, 11}) {
        for (i64 M = 0; M < p; ++M) {
            std::complex<double> acc{0, 0};
            for (i64 x = 1; x < p; ++x) acc += unit_phase(M * x, p);
            CHECK(std::abs(acc - std::complex<double>(
                               static_cast<double>(ramanujan_sum(p, M)), 0.0)) < 1e-9);
        }
    }
}

TEST_CASE("gauss sum closed form frozen values") {
    auto g50 = gauss_sum_closed(5, 1, 0);
    CHECK(std::abs(g50 - std::complex<double>(std::sqrt(5.0), 0.0)) < 1e-12);
    auto g31 = gauss_sum_closed(3, 1, 0);
    CHECK(std::abs(g31 - std::complex<double>(0.0, std::sqrt(3.0))) < 1e-12);
    auto g52 = gauss_sum_closed(5, 2, 0);
    CHECK(std::abs(g52 - std::complex<double>(-std::sqrt(5.0), 0.0)) < 1e-12);
    CHECK_THROWS_AS(gauss_sum_closed(5, 10, 1), std::invalid_argument);
}

TEST_CASE("gauss sum closed form equals direct summation, small primes") {
    for (i64 p : {3, 5, 7, 11, 13, 17, 19, 23}) {
        for (i64 ell = 1; ell < p; ++ell)
            for (i64 m = 0; m < p; ++m) {
                CAPTURE(p);
                CAPTURE(ell);
                CAPTURE(m);
                CHECK(std::abs(gauss_sum_closed(p, ell, m) - gauss_sum_direct(p, ell, m)) <
                      1e-9);
            }
    }
}

TEST_CASE("uvw decomposition frozen values and exhaustive invariants") {
    auto d12 = decompose_uvw(12);
    CHECK(d12.u == 3);
    CHECK(d12.v == 1);
    CHECK(d12.w == 2);
    auto d8 = decompose_uvw(8);
    CHECK(d8.u == 1);
    CHECK(d8.v == 2);
    CHECK(d8.w == 2);
    auto d7 = decompose_uvw(7);
    CHECK(d7.u == 7);
    CHECK(d7.v == 1);
    CHECK(d7.w == 1);

    for (i64 rho = 1; rho <= 100000; ++rho) {
        auto d = decompose_uvw(rho);
        if (d.u * d.v * d.w * d.w != rho || d.w % d.v != 0 || gcd64(d.u, d.v * d.w) != 1) {
            CAPTURE(rho);
            REQUIRE(d.u * d.v * d.w * d.w == rho);
            REQUIRE(d.w % d.v == 0);
            REQUIRE(gcd64(d.u, d.v * d.w) == 1);
        }
    }
}

TEST_CASE("crt lift") {
    auto r = crt_lift(Residue(1, 3), Residue(0, 5));
    CHECK(r.combined.value == 10);
    CHECK(r.combined.modulus == 15);
    auto z = crt_lift(Residue(0, 2), Residue(0, 7));
    CHECK(z.combined.value == 0);
    CHECK(z.combined.modulus == 14);
    // derived: scan residues mod 35
    i64 expected = -1;
    for (i64 x = 0; x < 35; ++x)
        if (x % 5 == 2 && x % 7 == 3) expected = x;
    auto c = crt_lift(Residue(2, 5), Residue(3, 7));
    CHECK(c.combined.value == expected);
    CHECK(expected == 17);
    CHECK(c.cof1 * 5 + c.cof2 * 7 == 1);
    CHECK_THROWS_AS(crt_lift(Residue(1, 6), Residue(1, 4)), std::invalid_argument);
}

TEST_CASE("gcd conventions") {
    CHECK(gcd64(0, 0) == 0);
    CHECK(gcd64(-12, 30) == 6);
    CHECK(gcd128(i128(0), i128(-7)) == 7);
}
