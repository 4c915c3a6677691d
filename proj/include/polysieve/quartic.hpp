#ifndef POLYSIEVE_QUARTIC_HPP
#define POLYSIEVE_QUARTIC_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "polysieve/int128.hpp"
#include "polysieve/intpoly.hpp"

namespace polysieve {

// Monic depressed quartic f(x) = x^4 + a x^2 + b x. The pure-power case
// (a, b) = (0, 0) is legal for counting but rejected by prime-pool
// construction.
struct QuarticParams {
    i64 a = 0;
    i64 b = 0;

    bool is_pure_power() const { return a == 0 && b == 0; }
    IntPoly to_poly() const { return IntPoly({1, 0, a, b, 0}); }
    i128 eval(i128 x) const;  // x^4 + a x^2 + b x, checked
};

// Result of rewriting 4^4 a0^3 (a0 x^4 + ... + a4) as X^4 + a X^2 + b X + tail
// with X = 4 a0 x + a1. The three derived coefficients are always integers.
struct NormalizedQuartic {
    QuarticParams params;  // (a, b) of the monic model
    i64 a0 = 1;
    i64 shift = 0;         // a1: X = 4 a0 x + a1
    i128 scale = 256;      // 4^4 a0^3
    i128 tail = 0;         // constant term of the monic model
};

NormalizedQuartic normalize_quartic(i64 a0, i64 a1, i64 a2, i64 a3, i64 a4);

// (params, h1, h2, rho) with the derived quantities c = 2b/h2,
// A = h1^2 h2^2 rho^2 + 2a and the cubic discriminant combination
// 8 a^3 + 27 b^2. Requires h2 | 2b.
struct QuarticContext {
    QuarticParams params;
    i64 h1 = 1, h2 = 1, rho = 1;
    i64 c = 0;
    i128 A = 0;
    i128 delta_cubic = 0;

    QuarticContext(QuarticParams p, i64 h1_, i64 h2_, i64 rho_);
};

// F(u,v) = h2^2 v^3 + (h1^2 u^2 + 2a) v + c
i128 eval_F(const QuarticContext& ctx, i128 u, i128 v);
// G(u,v) = v^3 + (h1^2 h2^2 u^2 + 2a) v + h2 c
i128 eval_G(const QuarticContext& ctx, i128 u, i128 v);
// H(z1,z2,w) = z1^2 + z1 z2 + z2^2 + A w^2
i128 eval_H(const QuarticContext& ctx, i128 z1, i128 z2, i128 w);
// K(z,x,y,w) = h1 h2 rho (w z^3 + A z w^3 + h2 c w^4)
//              - 2(x^4 - y^4) - 2a (x^2 - y^2) w^2 - 2b (x - y) w^3
i128 eval_K(const QuarticContext& ctx, i128 z, i128 x, i128 y, i128 w);

enum class TransformFault {
    NotASolution,
    TrivialPermutation,
    EqualDifferences,   // u1 = v1: the finite leftover family
    NonCanonical,       // strict ordering chain fails after reordering
    IndivisibleShift,   // h2 does not divide 2b (cannot happen for true solutions)
};

class TransformError : public std::runtime_error {
  public:
    TransformError(TransformFault fault, const std::string& what)
        : std::runtime_error(what), fault_(fault) {}
    TransformFault fault() const { return fault_; }

  private:
    TransformFault fault_;
};

// A solution of f(y1)+f(y2) = f(y3)+f(y4) carried through the full change
// of variables. `original` is the canonical reordering (max first,
// y3 >= y4), `intermediate` is (u1, u2, v1, v2), and the reduced tuple is
// (h1, h2, r, s, rho, sigma). Both sides of the reduced equation are kept.
struct TransformedSolution {
    QuarticParams params;
    std::array<i64, 4> original{};
    std::array<i64, 4> intermediate{};
    i64 h1 = 1, h2 = 1, r = 0, s = 0, rho = 0, sigma = 0;
    i128 reduced_lhs = 0, reduced_rhs = 0;

    QuarticContext context() const { return QuarticContext(params, h1, h2, rho); }
};

// Accepts the four entries in any order; canonicalizes internally.
TransformedSolution forward_transform(std::array<i64, 4> y, QuarticParams params);

// Exact inverse of the reduction: reproduces the canonical quadruple.
std::array<i64, 4> reconstruct_quadruple(const TransformedSolution& ts);

// Projective points of P^3(F_p) where K and all four partials vanish.
// Empty output certifies that K is nonsingular mod p.
std::vector<std::array<i64, 4>> k_singular_points_mod_p(const QuarticContext& ctx, i64 p);

// Primes p <= Q with p coprime to 6 h1 h2 rho A and K nonsingular mod p.
std::vector<i64> build_prime_pool(const QuarticContext& ctx, i64 Q);
bool is_pool_prime(const QuarticContext& ctx, i64 p);

// #{x mod p : rho G(rho, x) = r F(r, s) mod p}; at most 3.
i64 nu_quartic(const QuarticContext& ctx, i64 r, i64 s, i64 p);

enum class SolutionClass { N1, N2 };

struct Classification {
    SolutionClass cls = SolutionClass::N2;
    i128 A = 0;
    i64 max_h = 1;
    // c = 0 and h2^2 rho^2 A^3 = r^2 A'^3 with A' = h1^2 r^2 + 2a: the
    // degenerate-fibre predicate for the fixed-(h, rho, r) cubic curve.
    bool reduced_predicate = false;
};

Classification classify_solution(const TransformedSolution& ts, i64 C, i64 H);

}  // namespace polysieve

#endif
