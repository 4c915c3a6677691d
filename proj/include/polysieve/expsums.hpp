#ifndef POLYSIEVE_EXPSUMS_HPP
#define POLYSIEVE_EXPSUMS_HPP

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "polysieve/quartic.hpp"
#include "polysieve/rational.hpp"

namespace polysieve {

using Complex = std::complex<double>;

// Compensated accumulator; keeps the deterministic merge order exact in
// practice at 10^7-term scales.
struct ComplexKahan {
    Complex sum{0.0, 0.0};
    Complex comp{0.0, 0.0};

    void add(Complex x) {
        Complex y = x - comp;
        Complex t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Complex value() const { return sum; }
};

// Centered representative of x mod m, in (-m/2, m/2].
i64 centered_rep(i64 x, i64 m);

// Exact value of sum_{1 <= y <= Y} e_mod(-N y): floor(Y) for N = 0 mod,
// otherwise the closed geometric form.
Complex geometric_phase_sum(double Y, i64 N, i64 modulus);
// min(floor(Y), modulus / (2 |N_centered|)); standard sine-bound envelope.
double geometric_phase_envelope(double Y, i64 N, i64 modulus);

// Per-prime local sums attached to a context. Construction validates that
// p belongs to the context's prime pool and builds the residue tables.
class LocalSums {
  public:
    LocalSums(const QuarticContext& ctx, i64 p);

    i64 prime() const { return p_; }
    const QuarticContext& context() const { return ctx_; }
    i64 nu(i64 r, i64 s) const;  // local root count, 0..3

    // sum over (r,s) mod p of nu^t e_p(Mr + Ns), t <= 4.
    Complex nu_moment(int t, i64 M, i64 N) const;
    i64 nu_moment_zero(int t) const;  // exact integer value at (M,N) = (0,0)

    // sum over (x,y,z) in F_p^3 with h1 h2 rho G(rho,z) = 2(f(x)-f(y)) of
    // e_p(c1 x + c2 y).
    Complex surface_sum(i64 c1, i64 c2) const;
    i64 surface_count() const;  // exact point count (c = 0 value)

    // Same surface intersected with H(z1,z2,1) = 0, summed over
    // (x,y,z1,z2) in F_p^4.
    Complex quadric_surface_sum(i64 c1, i64 c2) const;
    i64 quadric_surface_count() const;

    // Diagonal z1 = z2 part of the quadric surface sum (the piece removed
    // when rewriting the second moment through the quadric).
    Complex quadric_diagonal_sum(i64 c1, i64 c2) const;

    // Full (M,N) grid of nu moments, index M*p + N. O(p^3) build.
    std::vector<Complex> nu_moment_grid(int t) const;

  private:
    QuarticContext ctx_;
    i64 p_;
    std::vector<uint8_t> nu_;       // p*p
    std::vector<i64> f_table_;      // f(x) mod p
    std::vector<i64> g_of_z_;       // h1 h2 rho G(rho, z) mod p
    std::vector<Complex> phase_;    // e_p(k)
};

// Phi(modulus; M, N): sum of e_mod(M r + N s) over (r,s) mod modulus with
// gcd(rs, modulus) = 1 and F(r,s) = 0 mod modulus. Direct enumeration.
Complex root_exp_sum(const QuarticContext& ctx, i64 modulus, i64 M, i64 N);
// Same value assembled multiplicatively from prime-power pieces.
Complex root_exp_sum_assembled(const QuarticContext& ctx, i64 modulus, i64 M, i64 N);
// Exact count of constrained roots (the (M,N) = (0,0) value).
i64 root_count(const QuarticContext& ctx, i64 modulus);
// All (M,N) mod modulus at once, index M*modulus + N.
std::vector<Complex> root_exp_sum_grid(const QuarticContext& ctx, i64 modulus);

// Joint moments Psi_{i,j}(m,n) over (r,s) mod p*q*rho. The evaluator keeps
// the residue tables so repeated (m,n) samples stay cheap.
class JointSumEvaluator {
  public:
    JointSumEvaluator(const QuarticContext& ctx, i64 p, i64 q);

    i64 modulus() const { return L_; }
    const LocalSums& left() const { return sums_p_; }
    const LocalSums& right() const { return sums_q_; }

    // Direct enumeration over the full (r,s) grid mod p*q*rho; returns all
    // nine (i,j) in {0,1,2}^2 values at once, index i*3 + j.
    std::array<Complex, 9> direct_all(i64 m, i64 n) const;
    Complex direct(int i, int j, i64 m, i64 n) const;

    // Assembled path: CRT factorization into local sums with
    // Bezout-twisted frequencies (p != q), or the p-divisibility rule with
    // the p^2 factor (p = q).
    Complex factored(int i, int j, i64 m, i64 n) const;

    // Exact integer Psi_{i,j}(0,0).
    i128 zero_value(int i, int j) const;

  private:
    QuarticContext ctx_;
    i64 p_, q_, rho_, L_;
    LocalSums sums_p_, sums_q_;
    std::vector<uint8_t> nu_p_tab_;   // p*p local root counts
    std::vector<uint8_t> nu_q_tab_;   // q*q
    std::vector<uint8_t> rho_ok_;     // rho*rho unit+root filter
    std::vector<int> mod_p_, mod_q_, mod_rho_;  // residue maps on [0, L)
    std::vector<Complex> phase_;                // e_L(k)
};

Complex joint_nu_sum_direct(const QuarticContext& ctx, i64 p, i64 q, int i, int j, i64 m, i64 n);
Complex joint_nu_sum_factored(const QuarticContext& ctx, i64 p, i64 q, int i, int j, i64 m,
                              i64 n);
i128 joint_nu_sum_zero(const QuarticContext& ctx, i64 p, i64 q, int i, int j);

// Box sums over positive (r,s) with r <= 2B/h1, s <= 2B/h2, the rho-root
// filter, and nu_p^i nu_q^j weights.
i128 lattice_moment_sum(const QuarticContext& ctx, i64 B, i64 p, i64 q, int i, int j);
// The same number reconstructed through the character decomposition
// (1/(pq rho)^2) sum_{m,n} Gamma(2B/h1, m) Gamma(2B/h2, n) Psi_{i,j}(m,n).
Complex lattice_moment_fourier(const QuarticContext& ctx, i64 B, i64 p, i64 q, int i, int j);

// Main-term candidate 4 Psi_{i,j}(0,0) B^2 / (h1 h2 (pq rho)^2), exact.
Rational main_term(const QuarticContext& ctx, i64 B, i64 p, i64 q, int i, int j);
// sum_{i,j} c_{i,j}(1) M_{i,j}: the alpha = 1 cancellation combination.
Rational main_term_cancellation(const QuarticContext& ctx, i64 B, i64 p, i64 q);

// ---- bound scans ----------------------------------------------------------

struct ScanRow {
    std::vector<i64> params;
    double value = 0.0;
    double envelope = 0.0;
    double ratio = 0.0;
};

struct BoundScanReport {
    std::string family;
    std::string range;
    std::vector<std::string> param_names;
    std::vector<ScanRow> rows;  // one row per parameter cell: its worst witness
    double worst_ratio = 0.0;
    std::vector<i64> worst_witness;
};

struct ScanRanges {
    i64 pmax = 61;
    i64 prime_power_max = 2000;
    i64 rho_max = 200;
    i64 box = 100;  // B for the main-term families
};

BoundScanReport scan_nu_moments(const QuarticContext& ctx, i64 pmax);
BoundScanReport scan_phi_prime(const QuarticContext& ctx, i64 pmax);
BoundScanReport scan_phi_prime_power(const QuarticContext& ctx, i64 prime_power_max);
BoundScanReport scan_phi_composite(const QuarticContext& ctx, i64 rho_max);
BoundScanReport scan_psi_main(const QuarticContext& ctx, i64 pmax);
BoundScanReport scan_main_term_cancel(const QuarticContext& ctx, i64 pmax, i64 B);
BoundScanReport bound_scan(const std::string& family, const QuarticContext& ctx,
                           const ScanRanges& ranges);
std::vector<std::string> bound_scan_families();

}  // namespace polysieve

#endif
