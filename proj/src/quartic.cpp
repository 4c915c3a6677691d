#include "polysieve/quartic.hpp"

#include <algorithm>

#include "polysieve/modarith.hpp"

namespace polysieve {

i128 QuarticParams::eval(i128 x) const {
    i128 x2 = checked_mul(x, x);
    i128 x4 = checked_mul(x2, x2);
    return checked_add(checked_add(x4, checked_mul(a, x2)), checked_mul(b, x));
}

NormalizedQuartic normalize_quartic(i64 a0, i64 a1, i64 a2, i64 a3, i64 a4) {
    if (a0 == 0) throw std::invalid_argument("normalize_quartic: leading coefficient is zero");
    NormalizedQuartic out;
    out.a0 = a0;
    out.shift = a1;
    i128 A0 = a0, A1 = a1;
    out.scale = checked_mul(checked_mul(checked_mul(A0, A0), A0), 256);
    // Matching coefficients of 256 a0^3 f(x) = X^4 + b2 X^2 + b3 X + b4,
    // X = 4 a0 x + a1, solves the triangular system:
    i128 b2 = checked_sub(checked_mul(checked_mul(16, A0), a2), checked_mul(6, checked_mul(A1, A1)));
    i128 b3 = checked_add(
        checked_sub(checked_mul(checked_mul(64, checked_mul(A0, A0)), a3),
                    checked_mul(32, checked_mul(A0, checked_mul(A1, a2)))),
        checked_mul(8, checked_mul(A1, checked_mul(A1, A1))));
    i128 b4 = checked_sub(
        checked_add(checked_mul(out.scale, a4),
                    checked_mul(16, checked_mul(A0, checked_mul(A1, checked_mul(A1, a2))))),
        checked_add(checked_mul(64, checked_mul(checked_mul(A0, A0), checked_mul(A1, a3))),
                    checked_mul(3, checked_mul(checked_mul(A1, A1), checked_mul(A1, A1)))));
    if (b2 > INT64_MAX || b2 < INT64_MIN || b3 > INT64_MAX || b3 < INT64_MIN)
        throw std::overflow_error("normalize_quartic: derived coefficients out of range");
    out.params = {static_cast<i64>(b2), static_cast<i64>(b3)};
    out.tail = b4;

    // Verify the identity coefficient-by-coefficient before returning.
    // 256 a0^3 (a0 x^4 + ... + a4) == (4 a0 x + a1)^4 + b2 (.)^2 + b3 (.) + b4
    const i64 input[5] = {a0, a1, a2, a3, a4};
    for (int probe = -2; probe <= 2; ++probe) {
        i128 x = probe;
        i128 lhs = 0;
        for (i64 ci : input) lhs = checked_add(checked_mul(lhs, x), ci);
        lhs = checked_mul(lhs, out.scale);
        i128 X = checked_add(checked_mul(checked_mul(4, A0), x), A1);
        i128 X2 = checked_mul(X, X);
        i128 rhs = checked_add(checked_add(checked_mul(X2, X2), checked_mul(b2, X2)),
                               checked_add(checked_mul(b3, X), b4));
        if (lhs != rhs) throw std::logic_error("normalize_quartic: identity check failed");
    }
    return out;
}

QuarticContext::QuarticContext(QuarticParams p, i64 h1_, i64 h2_, i64 rho_)
    : params(p), h1(h1_), h2(h2_), rho(rho_) {
    if (h1 < 1 || h2 < 1 || rho < 1)
        throw std::invalid_argument("QuarticContext: h1, h2, rho must be positive");
    i128 two_b = static_cast<i128>(2) * params.b;
    if (two_b % h2 != 0) throw std::invalid_argument("QuarticContext: h2 must divide 2b");
    c = static_cast<i64>(two_b / h2);
    i128 hh = checked_mul(static_cast<i128>(h1) * h1, static_cast<i128>(h2) * h2);
    A = checked_add(checked_mul(hh, static_cast<i128>(rho) * rho),
                    static_cast<i128>(2) * params.a);
    i128 a3 = checked_mul(checked_mul(static_cast<i128>(params.a), params.a), params.a);
    delta_cubic = checked_add(checked_mul(static_cast<i128>(8), a3),
                              checked_mul(static_cast<i128>(27),
                                          checked_mul(static_cast<i128>(params.b), params.b)));
}

i128 eval_F(const QuarticContext& ctx, i128 u, i128 v) {
    i128 v3 = checked_mul(checked_mul(v, v), v);
    i128 mid = checked_add(checked_mul(static_cast<i128>(ctx.h1) * ctx.h1, checked_mul(u, u)),
                           static_cast<i128>(2) * ctx.params.a);
    return checked_add(
        checked_add(checked_mul(static_cast<i128>(ctx.h2) * ctx.h2, v3), checked_mul(mid, v)),
        ctx.c);
}

i128 eval_G(const QuarticContext& ctx, i128 u, i128 v) {
    i128 v3 = checked_mul(checked_mul(v, v), v);
    i128 hh = checked_mul(static_cast<i128>(ctx.h1) * ctx.h1, static_cast<i128>(ctx.h2) * ctx.h2);
    i128 mid = checked_add(checked_mul(hh, checked_mul(u, u)), static_cast<i128>(2) * ctx.params.a);
    return checked_add(checked_add(v3, checked_mul(mid, v)),
                       checked_mul(static_cast<i128>(ctx.h2), ctx.c));
}

i128 eval_H(const QuarticContext& ctx, i128 z1, i128 z2, i128 w) {
    i128 quad = checked_add(checked_add(checked_mul(z1, z1), checked_mul(z1, z2)),
                            checked_mul(z2, z2));
    return checked_add(quad, checked_mul(ctx.A, checked_mul(w, w)));
}

i128 eval_K(const QuarticContext& ctx, i128 z, i128 x, i128 y, i128 w) {
    i128 hhr = checked_mul(checked_mul(static_cast<i128>(ctx.h1), ctx.h2), ctx.rho);
    i128 w2 = checked_mul(w, w);
    i128 w3 = checked_mul(w2, w);
    i128 w4 = checked_mul(w2, w2);
    i128 z3 = checked_mul(checked_mul(z, z), z);
    i128 cubic_part = checked_add(
        checked_add(checked_mul(w, z3), checked_mul(ctx.A, checked_mul(z, w3))),
        checked_mul(static_cast<i128>(ctx.h2) * ctx.c, w4));
    i128 x2 = checked_mul(x, x), y2 = checked_mul(y, y);
    i128 x4 = checked_mul(x2, x2), y4 = checked_mul(y2, y2);
    i128 out = checked_mul(hhr, cubic_part);
    out = checked_sub(out, checked_mul(2, checked_sub(x4, y4)));
    out = checked_sub(out, checked_mul(static_cast<i128>(2) * ctx.params.a,
                                       checked_mul(checked_sub(x2, y2), w2)));
    out = checked_sub(out, checked_mul(static_cast<i128>(2) * ctx.params.b,
                                       checked_mul(checked_sub(x, y), w3)));
    return out;
}

TransformedSolution forward_transform(std::array<i64, 4> y, QuarticParams params) {
    for (i64 v : y)
        if (v < 0) throw TransformError(TransformFault::NotASolution, "negative entry");
    i128 lhs = checked_add(params.eval(y[0]), params.eval(y[1]));
    i128 rhs = checked_add(params.eval(y[2]), params.eval(y[3]));
    if (lhs != rhs)
        throw TransformError(TransformFault::NotASolution,
                             "quadruple does not satisfy the equation");
    {
        std::array<i64, 2> left{y[0], y[1]}, right{y[2], y[3]};
        std::sort(left.begin(), left.end());
        std::sort(right.begin(), right.end());
        if (left == right)
            throw TransformError(TransformFault::TrivialPermutation,
                                 "right pair is a permutation of the left pair");
    }
    // Canonical order: the pair containing the overall maximum comes first
    // with the maximum leading; the other pair is sorted descending.
    std::array<i64, 4> cy = y;
    if (std::max(cy[2], cy[3]) > std::max(cy[0], cy[1])) {
        std::swap(cy[0], cy[2]);
        std::swap(cy[1], cy[3]);
    }
    if (cy[1] > cy[0]) std::swap(cy[0], cy[1]);
    if (cy[3] > cy[2]) std::swap(cy[2], cy[3]);
    if (!(cy[0] > cy[2] && cy[2] >= cy[3] && cy[3] > cy[1]))
        throw TransformError(TransformFault::NonCanonical,
                             "ordering chain y1 > y3 >= y4 > y2 fails");

    TransformedSolution ts;
    ts.params = params;
    ts.original = cy;
    i64 u1 = cy[0] - cy[2], u2 = cy[0] + cy[2];
    i64 v1 = cy[3] - cy[1], v2 = cy[3] + cy[1];
    ts.intermediate = {u1, u2, v1, v2};
    if (u1 == v1)
        throw TransformError(TransformFault::EqualDifferences,
                             "u1 = v1: member of the finite leftover family");
    if (u2 == v2)
        throw std::logic_error("forward_transform: u2 = v2 cannot occur in canonical order");

    ts.h1 = gcd64(u1, v1);
    ts.h2 = gcd64(u2, v1 / ts.h1);
    ts.r = u1 / ts.h1;
    ts.s = u2 / ts.h2;
    ts.rho = v1 / (ts.h1 * ts.h2);
    ts.sigma = v2;
    if ((static_cast<i128>(2) * params.b) % ts.h2 != 0)
        throw TransformError(TransformFault::IndivisibleShift, "h2 does not divide 2b");
    QuarticContext ctx(params, ts.h1, ts.h2, ts.rho);

    if (gcd64(ts.r, ts.h2 * ts.rho) != 1 || gcd64(ts.s, ts.rho) != 1)
        throw std::logic_error("forward_transform: coprimality invariant failed");
    if ((ts.r - ts.h2 * ts.rho) == 0 || (ts.h2 * ts.s - ts.sigma) == 0)
        throw std::logic_error("forward_transform: nondegeneracy invariant failed");

    ts.reduced_lhs = checked_mul(ts.r, eval_F(ctx, ts.r, ts.s));
    ts.reduced_rhs = checked_mul(ts.rho, eval_G(ctx, ts.rho, ts.sigma));
    if (ts.reduced_lhs != ts.reduced_rhs)
        throw std::logic_error("forward_transform: reduced equation mismatch");
    return ts;
}

std::array<i64, 4> reconstruct_quadruple(const TransformedSolution& ts) {
    i64 u1 = ts.h1 * ts.r, u2 = ts.h2 * ts.s;
    i64 v1 = ts.h1 * ts.h2 * ts.rho, v2 = ts.sigma;
    if ((u1 + u2) % 2 != 0 || (v1 + v2) % 2 != 0)
        throw std::logic_error("reconstruct_quadruple: parity mismatch");
    return {(u2 + u1) / 2, (v2 - v1) / 2, (u2 - u1) / 2, (v2 + v1) / 2};
}

namespace {

struct ModEval {
    i64 p;
    i64 hhr, A, h2c, a2, b2;  // reduced mod p: h1 h2 rho, A, h2 c, 2a, 2b

    explicit ModEval(const QuarticContext& ctx, i64 p_) : p(p_) {
        hhr = mod_reduce(static_cast<i128>(ctx.h1) * ctx.h2 % p * ctx.rho, p);
        A = mod_reduce(ctx.A, p);
        h2c = mod_reduce(static_cast<i128>(ctx.h2) * ctx.c, p);
        a2 = mod_reduce(static_cast<i128>(2) * ctx.params.a, p);
        b2 = mod_reduce(static_cast<i128>(2) * ctx.params.b, p);
    }
    i64 mul(i64 x, i64 y) const { return mod_reduce(static_cast<i128>(x) * y, p); }
    i64 k_value(i64 z, i64 x, i64 y, i64 w) const {
        i64 w2 = mul(w, w), w3 = mul(w2, w), w4 = mul(w2, w2);
        i64 z3 = mul(mul(z, z), z);
        i64 cubic = mod_reduce(
            static_cast<i128>(mul(w, z3)) + mul(A, mul(z, w3)) + mul(h2c, w4), p);
        i64 x2 = mul(x, x), y2 = mul(y, y);
        i64 x4 = mul(x2, x2), y4 = mul(y2, y2);
        i128 acc = static_cast<i128>(mul(hhr, cubic));
        acc -= 2 * static_cast<i128>(mod_reduce(static_cast<i128>(x4) - y4, p));
        acc -= static_cast<i128>(mul(a2, mul(mod_reduce(static_cast<i128>(x2) - y2, p), w2)));
        acc -= static_cast<i128>(mul(b2, mul(mod_reduce(static_cast<i128>(x) - y, p), w3)));
        return mod_reduce(acc, p);
    }
    i64 dz(i64 z, i64, i64, i64 w) const {
        i64 w2 = mul(w, w);
        return mul(hhr, mod_reduce(static_cast<i128>(3) * mul(w, mul(z, z)) +
                                       mul(A, mul(w2, w)),
                                   p));
    }
    i64 dx(i64, i64 x, i64, i64 w) const {
        i64 w2 = mul(w, w);
        i128 v = static_cast<i128>(8) * mul(mul(x, x), x) +
                 static_cast<i128>(2) * mul(a2, mul(x, w2)) +
                 static_cast<i128>(mul(b2, mul(w2, w)));
        return mod_reduce(-v, p);
    }
    i64 dy(i64, i64, i64 y, i64 w) const {
        i64 w2 = mul(w, w);
        i128 v = static_cast<i128>(8) * mul(mul(y, y), y) +
                 static_cast<i128>(2) * mul(a2, mul(y, w2)) +
                 static_cast<i128>(mul(b2, mul(w2, w)));
        return mod_reduce(v, p);
    }
    i64 dw(i64 z, i64 x, i64 y, i64 w) const {
        i64 w2 = mul(w, w), w3 = mul(w2, w);
        i64 z3 = mul(mul(z, z), z);
        i128 cubic = static_cast<i128>(z3) + static_cast<i128>(3) * mul(A, mul(z, w2)) +
                     static_cast<i128>(4) * mul(h2c, w3);
        i128 v = static_cast<i128>(mul(hhr, mod_reduce(cubic, p)));
        i64 x2 = mul(x, x), y2 = mul(y, y);
        v -= static_cast<i128>(2) * mul(a2, mul(mod_reduce(static_cast<i128>(x2) - y2, p), w));
        v -= static_cast<i128>(3) * mul(b2, mul(mod_reduce(static_cast<i128>(x) - y, p), w2));
        return mod_reduce(v, p);
    }
};

}  // namespace

std::vector<std::array<i64, 4>> k_singular_points_mod_p(const QuarticContext& ctx, i64 p) {
    if (!is_prime(p)) throw std::invalid_argument("k_singular_points_mod_p: p must be prime");
    if (p > 101)
        throw std::invalid_argument("k_singular_points_mod_p: exhaustive scan capped at p <= 101");
    ModEval ev(ctx, p);
    std::vector<std::array<i64, 4>> singular;
    auto visit = [&](i64 z, i64 x, i64 y, i64 w) {
        if (ev.k_value(z, x, y, w) != 0) return;
        if (ev.dz(z, x, y, w) != 0 || ev.dx(z, x, y, w) != 0 || ev.dy(z, x, y, w) != 0 ||
            ev.dw(z, x, y, w) != 0)
            return;
        singular.push_back({z, x, y, w});
    };
    // Normalized projective representatives: first nonzero coordinate = 1.
    for (i64 x = 0; x < p; ++x)
        for (i64 y = 0; y < p; ++y)
            for (i64 w = 0; w < p; ++w) visit(1, x, y, w);
    for (i64 y = 0; y < p; ++y)
        for (i64 w = 0; w < p; ++w) visit(0, 1, y, w);
    for (i64 w = 0; w < p; ++w) visit(0, 0, 1, w);
    visit(0, 0, 0, 1);
    return singular;
}

bool is_pool_prime(const QuarticContext& ctx, i64 p) {
    if (!is_prime(p)) return false;
    i128 six = static_cast<i128>(6) * ctx.h1 * ctx.h2 * ctx.rho;
    if (mod_reduce(six, p) == 0) return false;
    if (mod_reduce(ctx.A, p) == 0) return false;
    return k_singular_points_mod_p(ctx, p).empty();
}

std::vector<i64> build_prime_pool(const QuarticContext& ctx, i64 Q) {
    if (Q > 101) throw std::invalid_argument("build_prime_pool: Q capped at 101");
    if (ctx.params.is_pure_power())
        throw std::invalid_argument("build_prime_pool: (a,b) = (0,0) is excluded");
    if (ctx.A == 0) throw std::invalid_argument("build_prime_pool: context has A = 0");
    std::vector<i64> pool;
    for (i64 p : primes_up_to(Q))
        if (is_pool_prime(ctx, p)) pool.push_back(p);
    return pool;
}

i64 nu_quartic(const QuarticContext& ctx, i64 r, i64 s, i64 p) {
    if (!is_prime(p)) throw std::invalid_argument("nu_quartic: p must be prime");
    i128 six = static_cast<i128>(6) * ctx.h1 * ctx.h2 * ctx.rho;
    if (mod_reduce(six, p) == 0 || mod_reduce(ctx.A, p) == 0)
        throw std::invalid_argument("nu_quartic: p is excluded from the prime pool");
    i64 target = mod_reduce(checked_mul(static_cast<i128>(mod_reduce(r, p)),
                                        mod_reduce(eval_F(ctx, r, s), p)),
                            p);
    i64 rho_p = mod_reduce(ctx.rho, p);
    i64 A_p = mod_reduce(ctx.A, p);
    i64 h2c_p = mod_reduce(static_cast<i128>(ctx.h2) * ctx.c, p);
    i64 count = 0;
    for (i64 x = 0; x < p; ++x) {
        i64 g = mod_reduce(static_cast<i128>(x) * x % p * x + static_cast<i128>(A_p) * x + h2c_p,
                           p);
        if (mod_reduce(static_cast<i128>(rho_p) * g, p) == target) ++count;
    }
    return count;
}

Classification classify_solution(const TransformedSolution& ts, i64 C, i64 H) {
    Classification out;
    QuarticContext ctx = ts.context();
    out.A = ctx.A;
    out.max_h = std::max(ts.h1, ts.h2);
    out.cls = (abs128(ctx.A) > C && out.max_h <= H) ? SolutionClass::N1 : SolutionClass::N2;
    if (ctx.c == 0) {
        i128 lhs = checked_mul(checked_mul(static_cast<i128>(ctx.h2), ctx.h2),
                               checked_mul(checked_mul(static_cast<i128>(ts.rho), ts.rho),
                                           checked_mul(checked_mul(ctx.A, ctx.A), ctx.A)));
        i128 aprime = checked_add(checked_mul(checked_mul(static_cast<i128>(ts.h1), ts.h1),
                                              checked_mul(static_cast<i128>(ts.r), ts.r)),
                                  static_cast<i128>(2) * ctx.params.a);
        i128 rhs = checked_mul(checked_mul(static_cast<i128>(ts.r), ts.r),
                               checked_mul(checked_mul(aprime, aprime), aprime));
        out.reduced_predicate = (lhs == rhs);
    }
    return out;
}

}  // namespace polysieve
