#include <doctest.h>

#include <cmath>
#include <random>

#include "corpus.hpp"
#include "polysieve/expsums.hpp"
#include "polysieve/modarith.hpp"

using namespace polysieve;

namespace {

bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

double rel_tol(Complex a, Complex b, double eps = 1e-6) {
    return eps * std::max({1.0, std::abs(a), std::abs(b)});
}

// Triple-enumeration oracle for the first nu moment, straight from the
// integer forms of F and G.
Complex first_moment_oracle(const QuarticContext& ctx, i64 p, i64 M, i64 N) {
    ComplexKahan acc;
    for (i64 r = 0; r < p; ++r)
        for (i64 s = 0; s < p; ++s) {
            i64 target = mod_reduce(static_cast<i128>(r) * eval_F(ctx, r, s), p);
            for (i64 x = 0; x < p; ++x)
                if (mod_reduce(static_cast<i128>(ctx.rho) * eval_G(ctx, ctx.rho, x), p) ==
                    target)
                    acc.add(unit_phase(M * r + N * s, p));
        }
    return acc.value();
}

}  // namespace

TEST_CASE("geometric phase sums") {
    CHECK(geometric_phase_sum(9.7, 0, 15) == Complex{9.0, 0.0});
    CHECK(geometric_phase_sum(9.7, 30, 15) == Complex{9.0, 0.0});
    // full period vanishes
    for (i64 N = 1; N < 15; ++N)
        CHECK(close(geometric_phase_sum(15, N, 15), {0.0, 0.0}, 1e-12));
    // term-by-term oracle
    for (i64 N : {1, 2, 7, 11})
        for (double Y : {0.4, 1.0, 7.0, 7.9, 14.0}) {
            Complex direct{0, 0};
            for (i64 y = 1; y <= static_cast<i64>(std::floor(Y)); ++y)
                direct += unit_phase(-N * y, 15);
            CHECK(close(geometric_phase_sum(Y, N, 15), direct, 1e-12));
        }
    // sine-bound envelope
    for (i64 mod : {7, 15, 35})
        for (i64 N = -mod; N <= mod; ++N)
            for (double Y : {1.0, 3.5, 10.0, 20.0}) {
                double env = geometric_phase_envelope(Y, N, mod);
                CHECK(std::abs(geometric_phase_sum(Y, N, mod)) <= env + 1e-9);
            }
}

TEST_CASE("nu moment t = 0 closed form") {
    auto ctx = testcorpus::ctx_base();
    LocalSums sums(ctx, 7);
    CHECK(close(sums.nu_moment(0, 0, 0), {49.0, 0.0}, 1e-9));
    CHECK(close(sums.nu_moment(0, 7, 14), {49.0, 0.0}, 1e-9));
    for (i64 M = 0; M < 7; ++M)
        for (i64 N = 0; N < 7; ++N) {
            if (M == 0 && N == 0) continue;
            CHECK(close(sums.nu_moment(0, M, N), {0.0, 0.0}, 1e-9));
        }
}

TEST_CASE("first nu moment vs triple enumeration") {
    auto ctx = testcorpus::ctx_base();
    LocalSums sums(ctx, 7);
    for (i64 M = 0; M < 7; ++M)
        for (i64 N = 0; N < 7; ++N)
            CHECK(close(sums.nu_moment(1, M, N), first_moment_oracle(ctx, 7, M, N), 1e-9));
    // and the exact integer value at (0,0)
    Complex z = first_moment_oracle(ctx, 7, 0, 0);
    CHECK(close(z, {static_cast<double>(sums.nu_moment_zero(1)), 0.0}, 1e-9));
}

TEST_CASE("pool membership is enforced") {
    auto ctx = testcorpus::ctx_base();
    CHECK_THROWS_AS(LocalSums(ctx, 5), std::invalid_argument);   // singular reduction
    CHECK_THROWS_AS(LocalSums(ctx, 3), std::invalid_argument);   // divides 6A
}

TEST_CASE("first moment equals the surface sum with twisted arguments") {
    // exact change-of-variables identity, all (M,N), two contexts with
    // nontrivial h to exercise the inverse factors
    for (const QuarticContext& ctx :
         {testcorpus::ctx_base(), testcorpus::ctx_h1(), testcorpus::ctx_h2()}) {
        for (i64 p : build_prime_pool(ctx, 13)) {
            LocalSums sums(ctx, p);
            i64 h1_inv = mod_inverse(ctx.h1, p), h2_inv = mod_inverse(ctx.h2, p);
            for (i64 M = 0; M < p; ++M)
                for (i64 N = 0; N < p; ++N) {
                    Complex lhs = sums.nu_moment(1, M, N);
                    i64 c1 = mod_reduce(static_cast<i128>(M) * h1_inv +
                                            static_cast<i128>(N) * h2_inv,
                                        p);
                    i64 c2 = mod_reduce(-static_cast<i128>(M) * h1_inv +
                                            static_cast<i128>(N) * h2_inv,
                                        p);
                    Complex rhs = sums.surface_sum(c1, c2);
                    CAPTURE(p);
                    CAPTURE(M);
                    CAPTURE(N);
                    CHECK(close(lhs, rhs, 1e-7 * p * p));
                }
        }
    }
}

TEST_CASE("second moment decompositions") {
    auto ctx = testcorpus::ctx_base();
    for (i64 p : {7, 11}) {
        LocalSums sums(ctx, p);
        i64 h1_inv = mod_inverse(ctx.h1, p), h2_inv = mod_inverse(ctx.h2, p);
        for (i64 M = 0; M < p; ++M)
            for (i64 N = 0; N < p; ++N) {
                Complex sig2 = sums.nu_moment(2, M, N);
                Complex sig1 = sums.nu_moment(1, M, N);
                // quadruple-enumeration oracle for the off-diagonal part
                ComplexKahan bishop;
                for (i64 r = 0; r < p; ++r)
                    for (i64 s = 0; s < p; ++s) {
                        i64 target =
                            mod_reduce(static_cast<i128>(r) * eval_F(ctx, r, s), p);
                        for (i64 x1 = 0; x1 < p; ++x1) {
                            if (mod_reduce(static_cast<i128>(ctx.rho) *
                                               eval_G(ctx, ctx.rho, x1),
                                           p) != target)
                                continue;
                            for (i64 x2 = 0; x2 < p; ++x2) {
                                if (x2 == x1) continue;
                                if (mod_reduce(eval_H(ctx, x1, x2, 1), p) != 0) continue;
                                if (mod_reduce(static_cast<i128>(ctx.rho) *
                                                   eval_G(ctx, ctx.rho, x2),
                                               p) != target)
                                    continue;
                                bishop.add(unit_phase(M * r + N * s, p));
                            }
                        }
                    }
                CAPTURE(p);
                CAPTURE(M);
                CAPTURE(N);
                CHECK(close(sig2, sig1 + bishop.value(), 1e-7 * p * p));
                // surface route: T_p with twisted arguments minus its
                // diagonal piece
                i64 c1 = mod_reduce(static_cast<i128>(M) * h1_inv +
                                        static_cast<i128>(N) * h2_inv,
                                    p);
                i64 c2 = mod_reduce(-static_cast<i128>(M) * h1_inv +
                                        static_cast<i128>(N) * h2_inv,
                                    p);
                Complex via_surface = sig1 + sums.quadric_surface_sum(c1, c2) -
                                      sums.quadric_diagonal_sum(c1, c2);
                CHECK(close(sig2, via_surface, 1e-7 * p * p));
            }
    }
}

TEST_CASE("surface counts near p^2") {
    auto ctx = testcorpus::ctx_base();
    for (i64 p : build_prime_pool(ctx, 31)) {
        LocalSums sums(ctx, p);
        CHECK(std::abs(sums.surface_count() - p * p) <= 20 * p);
        CHECK(std::abs(sums.quadric_surface_count() - p * p) <= 20 * p);
    }
}

TEST_CASE("nu moment grid matches pointwise evaluation") {
    auto ctx = testcorpus::ctx_rho(3);
    LocalSums sums(ctx, 7);
    for (int t = 0; t <= 4; ++t) {
        auto grid = sums.nu_moment_grid(t);
        for (i64 M = 0; M < 7; ++M)
            for (i64 N = 0; N < 7; ++N)
                CHECK(close(grid[static_cast<std::size_t>(M * 7 + N)],
                            sums.nu_moment(t, M, N), 1e-8));
    }
}

TEST_CASE("constrained root sums over composite moduli") {
    auto ctx = testcorpus::ctx_base();
    CHECK(root_exp_sum(ctx, 1, 0, 0) == Complex{1.0, 0.0});
    // multiplicative assembly vs direct, spec's split cases
    for (i64 rho : {9, 15}) {
        for (i64 M = 0; M < rho; ++M)
            for (i64 N = 0; N < rho; ++N) {
                Complex d = root_exp_sum(ctx, rho, M, N);
                Complex a = root_exp_sum_assembled(ctx, rho, M, N);
                CHECK(close(d, a, rel_tol(d, a)));
            }
    }
    // full multiplicativity property: coprime splits with product <= 30
    for (i64 r1 = 2; r1 <= 30; ++r1)
        for (i64 r2 = r1 + 1; r1 * r2 <= 30; ++r2) {
            if (gcd64(r1, r2) != 1) continue;
            i64 rho = r1 * r2;
            Egcd eg = extended_gcd(r1, r2);
            for (i64 M = 0; M < rho; ++M)
                for (i64 N = 0; N < rho; ++N) {
                    Complex whole = root_exp_sum(ctx, rho, M, N);
                    Complex left = root_exp_sum(ctx, r1,
                                                mod_reduce(static_cast<i128>(eg.y) * M, r1),
                                                mod_reduce(static_cast<i128>(eg.y) * N, r1));
                    Complex right = root_exp_sum(ctx, r2,
                                                 mod_reduce(static_cast<i128>(eg.x) * M, r2),
                                                 mod_reduce(static_cast<i128>(eg.x) * N, r2));
                    CAPTURE(rho);
                    CHECK(close(whole, left * right, rel_tol(whole, left * right)));
                }
        }
    // exact count consistency
    CHECK(root_count(ctx, 15) == static_cast<i64>(std::lround(
                                      std::abs(root_exp_sum(ctx, 15, 0, 0)))));
}

TEST_CASE("joint moments: factorization against direct enumeration") {
    auto ctx = testcorpus::ctx_rho(3);
    JointSumEvaluator ev(ctx, 5, 7);
    std::mt19937 rng(314159);
    std::uniform_int_distribution<i64> pick(-500, 500);
    for (int trial = 0; trial < 30; ++trial) {
        i64 m = pick(rng), n = pick(rng);
        auto direct = ev.direct_all(m, n);
        for (int i = 0; i <= 2; ++i)
            for (int j = 0; j <= 2; ++j) {
                Complex f = ev.factored(i, j, m, n);
                Complex d = direct[static_cast<std::size_t>(i * 3 + j)];
                CAPTURE(m);
                CAPTURE(n);
                CHECK(close(d, f, rel_tol(d, f)));
            }
    }
    // exact zero values
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; j <= 2; ++j) {
            Complex d = ev.direct(i, j, 0, 0);
            i128 z = ev.zero_value(i, j);
            CHECK(close(d, {static_cast<double>(z), 0.0}, 1e-6 * std::abs(d)));
        }
}

TEST_CASE("joint moments: equal primes rule") {
    auto ctx = testcorpus::ctx_rho(1);
    JointSumEvaluator ev(ctx, 5, 5);
    // p does not divide (m,n): exact vanishing
    for (i64 m : {1, 2, 3})
        for (i64 n : {0, 1, 4}) {
            if (m % 5 == 0 && n % 5 == 0) continue;
            auto d = ev.direct(1, 1, m, n);
            CHECK(std::abs(d) <= 1e-9 * 25.0 * 25.0);
            CHECK(ev.factored(1, 1, m, n) == Complex{0.0, 0.0});
        }
    // divisible case matches the p^2 rule
    for (i64 m1 : {0, 1, 2})
        for (i64 n1 : {0, 1, 3})
            for (int i = 0; i <= 2; ++i)
                for (int j = 0; j <= 2; ++j) {
                    Complex d = ev.direct(i, j, 5 * m1, 5 * n1);
                    Complex f = ev.factored(i, j, 5 * m1, 5 * n1);
                    CHECK(close(d, f, rel_tol(d, f)));
                }
}

TEST_CASE("joint moments: Bezout representative invariance") {
    auto ctx = testcorpus::ctx_rho(3);
    JointSumEvaluator ev(ctx, 5, 7);
    const i64 p = 5, q = 7, rho = 3;
    LocalSums sums_p(ctx, p), sums_q(ctx, q);
    Egcd eg = extended_gcd(p * q, rho);
    Egcd pr = extended_gcd(p, q);
    for (i64 shift : {-2, 1, 5}) {
        // (X + rho t, Y - pq t) is an equally valid cofactor pair.
        i64 X = eg.x + rho * shift, Y = eg.y - p * q * shift;
        REQUIRE(p * q * X + rho * Y == 1);
        for (i64 m : {1, 4, 17})
            for (i64 n : {0, 2, 9}) {
                auto tw = [&](i64 cof, i64 mult, i64 v, i64 mod) {
                    return mod_reduce(static_cast<i128>(mod_reduce(cof, mod)) *
                                          mod_reduce(mult, mod) % mod * mod_reduce(v, mod),
                                      mod);
                };
                Complex manual = sums_p.nu_moment(1, tw(Y, pr.y, m, p), tw(Y, pr.y, n, p)) *
                                 sums_q.nu_moment(2, tw(Y, pr.x, m, q), tw(Y, pr.x, n, q)) *
                                 root_exp_sum(ctx, rho, tw(X, 1, m, rho), tw(X, 1, n, rho));
                Complex prod = ev.factored(1, 2, m, n);
                CHECK(close(manual, prod, rel_tol(manual, prod)));
            }
    }
}

TEST_CASE("box moments: direct lattice count vs character reconstruction") {
    for (i64 rho : {1, 3}) {
        auto ctx = testcorpus::ctx_rho(rho);
        for (i64 B : {0, 20}) {
            for (int i = 0; i <= 2; ++i)
                for (int j = 0; j <= 2; ++j) {
                    i128 direct = lattice_moment_sum(ctx, B, 5, 7, i, j);
                    Complex recon = lattice_moment_fourier(ctx, B, 5, 7, i, j);
                    double d = static_cast<double>(direct);
                    CAPTURE(rho);
                    CAPTURE(B);
                    CHECK(std::abs(recon - Complex{d, 0.0}) <=
                          1e-6 * std::max(1.0, std::abs(d)));
                }
        }
    }
}

TEST_CASE("main terms") {
    auto ctx = testcorpus::ctx_rho(1);
    // (0,0) joint weight is the plain residue count, so M_{0,0} collapses
    i128 phi0 = root_count(ctx, ctx.rho);
    Rational m00 = main_term(ctx, 30, 5, 7, 0, 0);
    Rational expect = Rational(4 * to_bigint(phi0) * 30 * 30,
                               BigInt(ctx.h1) * ctx.h2 * ctx.rho * ctx.rho);
    CHECK(m00 == expect);
    Rational cancel = main_term_cancellation(ctx, 30, 5, 7);
    Rational big = main_term(ctx, 30, 5, 7, 1, 1);
    CHECK(abs(cancel) < abs(big));  // alpha = 1 wipes the product main term
}

TEST_CASE("bound scans run and report reproducible witnesses") {
    auto ctx = testcorpus::ctx_base();
    ScanRanges ranges;
    ranges.pmax = 13;
    ranges.prime_power_max = 128;
    ranges.rho_max = 40;
    ranges.box = 30;
    for (const auto& family : bound_scan_families()) {
        auto report = bound_scan(family, ctx, ranges);
        CHECK(report.family == family);
        CHECK_FALSE(report.rows.empty());
        for (const auto& row : report.rows) {
            CHECK(std::isfinite(row.ratio));
            CHECK(row.ratio >= 0.0);
        }
        CHECK(report.worst_ratio >= 0.0);
        CHECK_FALSE(report.worst_witness.empty());
    }
    // witness reproducibility for the prime family
    auto phi_report = scan_phi_prime(ctx, 13);
    for (const auto& row : phi_report.rows) {
        i64 p = row.params[0], M = row.params[1], N = row.params[2];
        double value = std::abs(root_exp_sum(ctx, p, M, N));
        CHECK(value == doctest::Approx(row.value).epsilon(1e-9));
    }
}
