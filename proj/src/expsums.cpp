#include "polysieve/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polysieve/modarith.hpp"
#include "polysieve/sieve.hpp"

namespace polysieve {

namespace {

constexpr i64 kDirectModulusCap = 5000;  // (r,s) grids stay under 2.5e7 points

i64 ipow_small(i64 base, int e) {
    i64 r = 1;
    while (e-- > 0) r *= base;
    return r;
}

std::vector<Complex> phase_table(i64 mod) {
    std::vector<Complex> out(static_cast<std::size_t>(mod));
    for (i64 k = 0; k < mod; ++k) out[static_cast<std::size_t>(k)] = unit_phase(k, mod);
    return out;
}

i64 wrap(i64 idx, i64 mod) { return idx >= mod ? idx - mod : idx; }

}  // namespace

i64 centered_rep(i64 x, i64 m) {
    i64 r = mod_reduce(x, m);
    return 2 * r > m ? r - m : r;
}

Complex geometric_phase_sum(double Y, i64 N, i64 modulus) {
    if (modulus < 1) throw std::invalid_argument("geometric_phase_sum: modulus must be >= 1");
    if (Y < 0) throw std::invalid_argument("geometric_phase_sum: Y must be nonnegative");
    i64 terms = static_cast<i64>(std::floor(Y));
    if (terms <= 0) return {0.0, 0.0};
    i64 n = mod_reduce(N, modulus);
    if (n == 0) return {static_cast<double>(terms), 0.0};
    Complex zeta = unit_phase(-n, modulus);
    // zeta^terms through the reduced exponent keeps the argument exact.
    Complex zl = unit_phase(mod_reduce(-static_cast<i128>(n) * terms, modulus), modulus);
    return zeta * (zl - Complex{1.0, 0.0}) / (zeta - Complex{1.0, 0.0});
}

double geometric_phase_envelope(double Y, i64 N, i64 modulus) {
    double terms = std::floor(Y);
    i64 c = centered_rep(N, modulus);
    if (c == 0) return terms;
    double alt = static_cast<double>(modulus) / (2.0 * static_cast<double>(c < 0 ? -c : c));
    return std::min(terms, alt);
}

// ---------------------------------------------------------------------------
// LocalSums

LocalSums::LocalSums(const QuarticContext& ctx, i64 p) : ctx_(ctx), p_(p) {
    if (!is_pool_prime(ctx, p))
        throw std::invalid_argument("LocalSums: p is not in the context prime pool");
    const i64 a2 = mod_reduce(static_cast<i128>(2) * ctx.params.a, p);
    const i64 b = mod_reduce(ctx.params.b, p);
    const i64 A = mod_reduce(ctx.A, p);
    const i64 h2c = mod_reduce(static_cast<i128>(ctx.h2) * ctx.c, p);
    const i64 rho = mod_reduce(ctx.rho, p);
    const i64 hh = mod_reduce(static_cast<i128>(ctx.h1) * ctx.h2, p);
    const i64 h1sq = mod_reduce(static_cast<i128>(ctx.h1) * ctx.h1, p);
    const i64 h2sq = mod_reduce(static_cast<i128>(ctx.h2) * ctx.h2, p);
    const i64 c = mod_reduce(ctx.c, p);

    phase_ = phase_table(p);
    f_table_.resize(static_cast<std::size_t>(p));
    g_of_z_.resize(static_cast<std::size_t>(p));
    std::vector<i64> rho_g(static_cast<std::size_t>(p));
    for (i64 x = 0; x < p; ++x) {
        i64 x2 = mod_reduce(static_cast<i128>(x) * x, p);
        i64 x3 = mod_reduce(static_cast<i128>(x2) * x, p);
        i64 x4 = mod_reduce(static_cast<i128>(x2) * x2, p);
        f_table_[static_cast<std::size_t>(x)] = mod_reduce(
            static_cast<i128>(x4) + static_cast<i128>(mod_reduce(ctx.params.a, p)) * x2 +
                static_cast<i128>(b) * x,
            p);
        i64 g = mod_reduce(static_cast<i128>(x3) + static_cast<i128>(A) * x + h2c, p);
        rho_g[static_cast<std::size_t>(x)] = mod_reduce(static_cast<i128>(rho) * g, p);
        g_of_z_[static_cast<std::size_t>(x)] =
            mod_reduce(static_cast<i128>(hh) * rho_g[static_cast<std::size_t>(x)], p);
    }
    std::vector<uint8_t> rho_g_count(static_cast<std::size_t>(p), 0);
    for (i64 z = 0; z < p; ++z) ++rho_g_count[static_cast<std::size_t>(rho_g[static_cast<std::size_t>(z)])];

    nu_.resize(static_cast<std::size_t>(p * p));
    for (i64 r = 0; r < p; ++r) {
        i64 mid = mod_reduce(static_cast<i128>(h1sq) * r % p * r + a2, p);
        for (i64 s = 0; s < p; ++s) {
            i64 s3 = mod_reduce(static_cast<i128>(s) * s % p * s, p);
            i64 F = mod_reduce(static_cast<i128>(h2sq) * s3 + static_cast<i128>(mid) * s + c, p);
            i64 target = mod_reduce(static_cast<i128>(r) * F, p);
            nu_[static_cast<std::size_t>(r * p + s)] =
                rho_g_count[static_cast<std::size_t>(target)];
        }
    }
}

i64 LocalSums::nu(i64 r, i64 s) const {
    i64 rr = mod_reduce(r, p_), ss = mod_reduce(s, p_);
    return nu_[static_cast<std::size_t>(rr * p_ + ss)];
}

Complex LocalSums::nu_moment(int t, i64 M, i64 N) const {
    if (t < 0 || t > 4) throw std::invalid_argument("nu_moment: t must be in [0,4]");
    i64 m = mod_reduce(M, p_), n = mod_reduce(N, p_);
    double w[4];
    for (i64 v = 0; v < 4; ++v) w[v] = static_cast<double>(ipow_small(v, t));
    ComplexKahan acc;
    for (i64 r = 0; r < p_; ++r) {
        i64 idx = mod_reduce(static_cast<i128>(m) * r, p_);
        Complex row{0.0, 0.0};
        const uint8_t* nu_row = nu_.data() + r * p_;
        for (i64 s = 0; s < p_; ++s) {
            row += w[nu_row[s]] * phase_[static_cast<std::size_t>(idx)];
            idx = wrap(idx + n, p_);
        }
        acc.add(row);
    }
    return acc.value();
}

i64 LocalSums::nu_moment_zero(int t) const {
    if (t < 0 || t > 4) throw std::invalid_argument("nu_moment_zero: t must be in [0,4]");
    i64 acc = 0;
    for (uint8_t v : nu_) acc += ipow_small(v, t);
    return acc;
}

Complex LocalSums::surface_sum(i64 c1, i64 c2) const {
    std::vector<i64> count(static_cast<std::size_t>(p_), 0);
    for (i64 z = 0; z < p_; ++z) ++count[static_cast<std::size_t>(g_of_z_[static_cast<std::size_t>(z)])];
    i64 a = mod_reduce(c1, p_), b = mod_reduce(c2, p_);
    ComplexKahan acc;
    for (i64 x = 0; x < p_; ++x) {
        i64 idx = mod_reduce(static_cast<i128>(a) * x, p_);
        Complex row{0.0, 0.0};
        for (i64 y = 0; y < p_; ++y) {
            i64 diff = mod_reduce(
                static_cast<i128>(2) * (f_table_[static_cast<std::size_t>(x)] -
                                        f_table_[static_cast<std::size_t>(y)]),
                p_);
            row += static_cast<double>(count[static_cast<std::size_t>(diff)]) *
                   phase_[static_cast<std::size_t>(idx)];
            idx = wrap(idx + b, p_);
        }
        acc.add(row);
    }
    return acc.value();
}

i64 LocalSums::surface_count() const {
    std::vector<i64> count(static_cast<std::size_t>(p_), 0);
    for (i64 z = 0; z < p_; ++z) ++count[static_cast<std::size_t>(g_of_z_[static_cast<std::size_t>(z)])];
    i64 acc = 0;
    for (i64 x = 0; x < p_; ++x)
        for (i64 y = 0; y < p_; ++y)
            acc += count[static_cast<std::size_t>(mod_reduce(
                static_cast<i128>(2) * (f_table_[static_cast<std::size_t>(x)] -
                                        f_table_[static_cast<std::size_t>(y)]),
                p_))];
    return acc;
}

namespace {

// weight[v] = number of z2 with H(z1, z2, 1) = 0 summed over z1 in the
// g-fibre above v; `diag` restricts z1 to the H(z,z,1) = 0 locus instead.
std::vector<i64> quadric_weights(const std::vector<i64>& g_of_z, i64 A, i64 p, bool diag) {
    std::vector<i64> weight(static_cast<std::size_t>(p), 0);
    for (i64 z1 = 0; z1 < p; ++z1) {
        i64 w = 0;
        if (diag) {
            i64 h = mod_reduce(static_cast<i128>(3) * z1 % p * z1 + A, p);
            w = (h == 0) ? 1 : 0;
        } else {
            for (i64 z2 = 0; z2 < p; ++z2) {
                i64 h = mod_reduce(static_cast<i128>(z1) * z1 + static_cast<i128>(z1) * z2 +
                                       static_cast<i128>(z2) * z2 + A,
                                   p);
                if (h == 0) ++w;
            }
        }
        weight[static_cast<std::size_t>(g_of_z[static_cast<std::size_t>(z1)])] += w;
    }
    return weight;
}

}  // namespace

Complex LocalSums::quadric_surface_sum(i64 c1, i64 c2) const {
    std::vector<i64> weight = quadric_weights(g_of_z_, mod_reduce(ctx_.A, p_), p_, false);
    i64 a = mod_reduce(c1, p_), b = mod_reduce(c2, p_);
    ComplexKahan acc;
    for (i64 x = 0; x < p_; ++x) {
        i64 idx = mod_reduce(static_cast<i128>(a) * x, p_);
        Complex row{0.0, 0.0};
        for (i64 y = 0; y < p_; ++y) {
            i64 diff = mod_reduce(
                static_cast<i128>(2) * (f_table_[static_cast<std::size_t>(x)] -
                                        f_table_[static_cast<std::size_t>(y)]),
                p_);
            row += static_cast<double>(weight[static_cast<std::size_t>(diff)]) *
                   phase_[static_cast<std::size_t>(idx)];
            idx = wrap(idx + b, p_);
        }
        acc.add(row);
    }
    return acc.value();
}

i64 LocalSums::quadric_surface_count() const {
    std::vector<i64> weight = quadric_weights(g_of_z_, mod_reduce(ctx_.A, p_), p_, false);
    i64 acc = 0;
    for (i64 x = 0; x < p_; ++x)
        for (i64 y = 0; y < p_; ++y)
            acc += weight[static_cast<std::size_t>(mod_reduce(
                static_cast<i128>(2) * (f_table_[static_cast<std::size_t>(x)] -
                                        f_table_[static_cast<std::size_t>(y)]),
                p_))];
    return acc;
}

Complex LocalSums::quadric_diagonal_sum(i64 c1, i64 c2) const {
    std::vector<i64> weight = quadric_weights(g_of_z_, mod_reduce(ctx_.A, p_), p_, true);
    i64 a = mod_reduce(c1, p_), b = mod_reduce(c2, p_);
    ComplexKahan acc;
    for (i64 x = 0; x < p_; ++x) {
        i64 idx = mod_reduce(static_cast<i128>(a) * x, p_);
        Complex row{0.0, 0.0};
        for (i64 y = 0; y < p_; ++y) {
            i64 diff = mod_reduce(
                static_cast<i128>(2) * (f_table_[static_cast<std::size_t>(x)] -
                                        f_table_[static_cast<std::size_t>(y)]),
                p_);
            row += static_cast<double>(weight[static_cast<std::size_t>(diff)]) *
                   phase_[static_cast<std::size_t>(idx)];
            idx = wrap(idx + b, p_);
        }
        acc.add(row);
    }
    return acc.value();
}

std::vector<Complex> LocalSums::nu_moment_grid(int t) const {
    if (t < 0 || t > 4) throw std::invalid_argument("nu_moment_grid: t must be in [0,4]");
    const i64 p = p_;
    // Z_c(M,N) through the row transform T[c][r][N] = sum_{s in class c} e_p(Ns).
    std::vector<std::vector<Complex>> T(4, std::vector<Complex>(static_cast<std::size_t>(p * p),
                                                                Complex{0.0, 0.0}));
    for (i64 r = 0; r < p; ++r) {
        const uint8_t* nu_row = nu_.data() + r * p;
        for (i64 s = 0; s < p; ++s) {
            auto& tc = T[nu_row[s]];
            i64 idx = 0;
            for (i64 N = 0; N < p; ++N) {
                tc[static_cast<std::size_t>(r * p + N)] += phase_[static_cast<std::size_t>(idx)];
                idx = wrap(idx + s, p);
            }
        }
    }
    double w[4];
    for (i64 v = 0; v < 4; ++v) w[v] = static_cast<double>(ipow_small(v, t));
    std::vector<Complex> grid(static_cast<std::size_t>(p * p), Complex{0.0, 0.0});
    for (int c = 0; c < 4; ++c) {
        if (w[c] == 0.0) continue;
        for (i64 M = 0; M < p; ++M) {
            i64 idx = 0;
            for (i64 r = 0; r < p; ++r) {
                Complex ph = w[c] * phase_[static_cast<std::size_t>(idx)];
                const Complex* trow = T[static_cast<std::size_t>(c)].data() + r * p;
                Complex* grow = grid.data() + M * p;
                for (i64 N = 0; N < p; ++N) grow[N] += ph * trow[N];
                idx = wrap(idx + M, p);
            }
        }
    }
    return grid;
}

// ---------------------------------------------------------------------------
// Phi

namespace {

struct RhoTables {
    i64 mod;
    std::vector<uint8_t> unit;   // gcd(x, mod) == 1
    std::vector<i64> f_value;    // F(r,s) mod `mod`, row-major r*mod + s
    explicit RhoTables(const QuarticContext& ctx, i64 mod_) : mod(mod_) {
        if (mod < 1) throw std::invalid_argument("root sums: modulus must be >= 1");
        if (mod > kDirectModulusCap)
            throw std::invalid_argument("root sums: modulus beyond direct enumeration cap");
        unit.resize(static_cast<std::size_t>(mod));
        for (i64 x = 0; x < mod; ++x)
            unit[static_cast<std::size_t>(x)] = gcd64(x, mod) == 1 ? 1 : 0;
        const i64 h1sq = mod_reduce(static_cast<i128>(ctx.h1) * ctx.h1, mod);
        const i64 h2sq = mod_reduce(static_cast<i128>(ctx.h2) * ctx.h2, mod);
        const i64 a2 = mod_reduce(static_cast<i128>(2) * ctx.params.a, mod);
        const i64 c = mod_reduce(ctx.c, mod);
        std::vector<i64> cube(static_cast<std::size_t>(mod));
        for (i64 s = 0; s < mod; ++s)
            cube[static_cast<std::size_t>(s)] =
                mod_reduce(static_cast<i128>(s) * s % mod * s, mod);
        f_value.resize(static_cast<std::size_t>(mod * mod));
        for (i64 r = 0; r < mod; ++r) {
            i64 mid = mod_reduce(static_cast<i128>(h1sq) * r % mod * r + a2, mod);
            for (i64 s = 0; s < mod; ++s)
                f_value[static_cast<std::size_t>(r * mod + s)] = mod_reduce(
                    static_cast<i128>(h2sq) * cube[static_cast<std::size_t>(s)] +
                        static_cast<i128>(mid) * s + c,
                    mod);
        }
    }
};

std::vector<std::pair<i64, i64>> constrained_roots(const QuarticContext& ctx, i64 mod) {
    RhoTables tab(ctx, mod);
    std::vector<std::pair<i64, i64>> roots;
    for (i64 r = 0; r < mod; ++r) {
        if (!tab.unit[static_cast<std::size_t>(r)]) continue;
        for (i64 s = 0; s < mod; ++s)
            if (tab.unit[static_cast<std::size_t>(s)] &&
                tab.f_value[static_cast<std::size_t>(r * mod + s)] == 0)
                roots.emplace_back(r, s);
    }
    return roots;
}

}  // namespace

Complex root_exp_sum(const QuarticContext& ctx, i64 modulus, i64 M, i64 N) {
    if (modulus == 1) return {1.0, 0.0};
    auto roots = constrained_roots(ctx, modulus);
    auto phase = phase_table(modulus);
    i64 m = mod_reduce(M, modulus), n = mod_reduce(N, modulus);
    ComplexKahan acc;
    for (auto [r, s] : roots)
        acc.add(phase[static_cast<std::size_t>(
            mod_reduce(static_cast<i128>(m) * r + static_cast<i128>(n) * s, modulus))]);
    return acc.value();
}

i64 root_count(const QuarticContext& ctx, i64 modulus) {
    if (modulus == 1) return 1;
    return static_cast<i64>(constrained_roots(ctx, modulus).size());
}

std::vector<Complex> root_exp_sum_grid(const QuarticContext& ctx, i64 modulus) {
    if (modulus == 1) return {Complex{1.0, 0.0}};
    auto roots = constrained_roots(ctx, modulus);
    auto phase = phase_table(modulus);
    std::vector<Complex> grid(static_cast<std::size_t>(modulus * modulus), Complex{0.0, 0.0});
    for (auto [r, s] : roots) {
        for (i64 M = 0; M < modulus; ++M) {
            i64 idx = mod_reduce(static_cast<i128>(M) * r, modulus);
            Complex* row = grid.data() + M * modulus;
            for (i64 N = 0; N < modulus; ++N) {
                row[N] += phase[static_cast<std::size_t>(idx)];
                idx = wrap(idx + s, modulus);
            }
        }
    }
    return grid;
}

Complex root_exp_sum_assembled(const QuarticContext& ctx, i64 modulus, i64 M, i64 N) {
    auto fac = factorize(modulus);
    if (fac.size() <= 1) return root_exp_sum(ctx, modulus, M, N);
    i64 m1 = 1;
    for (int e = 0; e < fac[0].second; ++e) m1 *= fac[0].first;
    i64 m2 = modulus / m1;
    Egcd eg = extended_gcd(m1, m2);  // m1*x + m2*y = 1
    Complex left = root_exp_sum(ctx, m1, mod_reduce(static_cast<i128>(eg.y) * M, m1),
                                mod_reduce(static_cast<i128>(eg.y) * N, m1));
    Complex right = root_exp_sum_assembled(ctx, m2, mod_reduce(static_cast<i128>(eg.x) * M, m2),
                                           mod_reduce(static_cast<i128>(eg.x) * N, m2));
    return left * right;
}

// ---------------------------------------------------------------------------
// Psi

JointSumEvaluator::JointSumEvaluator(const QuarticContext& ctx, i64 p, i64 q)
    : ctx_(ctx),
      p_(p),
      q_(q),
      rho_(ctx.rho),
      L_(p * q * ctx.rho),
      sums_p_(ctx, p),
      sums_q_(ctx, q) {
    if (p != q && gcd64(p, q) != 1)
        throw std::invalid_argument("JointSumEvaluator: p and q must be equal or distinct primes");
    if (gcd64(p_ * q_, rho_) != 1)
        throw std::invalid_argument("JointSumEvaluator: gcd(pq, rho) must be 1");
    if (L_ > kDirectModulusCap)
        throw std::invalid_argument("JointSumEvaluator: p*q*rho beyond direct enumeration cap");
    nu_p_tab_.resize(static_cast<std::size_t>(p_ * p_));
    for (i64 r = 0; r < p_; ++r)
        for (i64 s = 0; s < p_; ++s)
            nu_p_tab_[static_cast<std::size_t>(r * p_ + s)] =
                static_cast<uint8_t>(sums_p_.nu(r, s));
    nu_q_tab_.resize(static_cast<std::size_t>(q_ * q_));
    for (i64 r = 0; r < q_; ++r)
        for (i64 s = 0; s < q_; ++s)
            nu_q_tab_[static_cast<std::size_t>(r * q_ + s)] =
                static_cast<uint8_t>(sums_q_.nu(r, s));
    RhoTables rt(ctx_, rho_);
    rho_ok_.resize(static_cast<std::size_t>(rho_ * rho_));
    for (i64 a = 0; a < rho_; ++a)
        for (i64 b = 0; b < rho_; ++b)
            rho_ok_[static_cast<std::size_t>(a * rho_ + b)] =
                (rt.unit[static_cast<std::size_t>(a)] && rt.unit[static_cast<std::size_t>(b)] &&
                 rt.f_value[static_cast<std::size_t>(a * rho_ + b)] == 0)
                    ? 1
                    : 0;
    mod_p_.resize(static_cast<std::size_t>(L_));
    mod_q_.resize(static_cast<std::size_t>(L_));
    mod_rho_.resize(static_cast<std::size_t>(L_));
    for (i64 x = 0; x < L_; ++x) {
        mod_p_[static_cast<std::size_t>(x)] = static_cast<int>(x % p_);
        mod_q_[static_cast<std::size_t>(x)] = static_cast<int>(x % q_);
        mod_rho_[static_cast<std::size_t>(x)] = static_cast<int>(x % rho_);
    }
    phase_ = phase_table(L_);
}

std::array<Complex, 9> JointSumEvaluator::direct_all(i64 m, i64 n) const {
    const i64 L = L_;
    const i64 mm = mod_reduce(m, L), nn = mod_reduce(n, L);
    ComplexKahan classes[16];
    for (i64 r = 0; r < L; ++r) {
        const uint8_t* nup_row = nu_p_tab_.data() + static_cast<std::size_t>(mod_p_[static_cast<std::size_t>(r)]) * p_;
        const uint8_t* nuq_row = nu_q_tab_.data() + static_cast<std::size_t>(mod_q_[static_cast<std::size_t>(r)]) * q_;
        const uint8_t* ok_row = rho_ok_.data() + static_cast<std::size_t>(mod_rho_[static_cast<std::size_t>(r)]) * rho_;
        Complex rows[16];
        for (auto& v : rows) v = Complex{0.0, 0.0};
        i64 idx = mod_reduce(static_cast<i128>(mm) * r, L);
        for (i64 s = 0; s < L; ++s) {
            if (ok_row[mod_rho_[static_cast<std::size_t>(s)]]) {
                int cls = 4 * nup_row[mod_p_[static_cast<std::size_t>(s)]] +
                          nuq_row[mod_q_[static_cast<std::size_t>(s)]];
                rows[cls] += phase_[static_cast<std::size_t>(idx)];
            }
            idx += nn;
            if (idx >= L) idx -= L;
        }
        for (int c = 0; c < 16; ++c) classes[c].add(rows[c]);
    }
    std::array<Complex, 9> out;
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; j <= 2; ++j) {
            Complex v{0.0, 0.0};
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    double wgt = static_cast<double>(ipow_small(a, i) * ipow_small(b, j));
                    if (wgt != 0.0) v += wgt * classes[4 * a + b].value();
                }
            out[static_cast<std::size_t>(i * 3 + j)] = v;
        }
    return out;
}

Complex JointSumEvaluator::direct(int i, int j, i64 m, i64 n) const {
    if (i < 0 || i > 2 || j < 0 || j > 2)
        throw std::invalid_argument("joint sums: i, j must lie in {0,1,2}");
    return direct_all(m, n)[static_cast<std::size_t>(i * 3 + j)];
}

Complex JointSumEvaluator::factored(int i, int j, i64 m, i64 n) const {
    if (i < 0 || i > 2 || j < 0 || j > 2)
        throw std::invalid_argument("joint sums: i, j must lie in {0,1,2}");
    if (p_ != q_) {
        Egcd eg = extended_gcd(p_ * q_, rho_);  // pq*X + rho*Y = 1
        Egcd pr = extended_gcd(p_, q_);         // p*x + q*y = 1
        auto twist = [&](i64 cof1, i64 cof2, i64 v, i64 mod) {
            return mod_reduce(static_cast<i128>(mod_reduce(cof1, mod)) *
                                  mod_reduce(cof2, mod) % mod * mod_reduce(v, mod),
                              mod);
        };
        Complex sp = sums_p_.nu_moment(i, twist(eg.y, pr.y, m, p_), twist(eg.y, pr.y, n, p_));
        Complex sq = sums_q_.nu_moment(j, twist(eg.y, pr.x, m, q_), twist(eg.y, pr.x, n, q_));
        Complex ph = root_exp_sum(ctx_, rho_, twist(eg.x, 1, m, rho_), twist(eg.x, 1, n, rho_));
        return sp * sq * ph;
    }
    if (mod_reduce(m, p_) != 0 || mod_reduce(n, p_) != 0) return {0.0, 0.0};
    i64 m1 = m / p_, n1 = n / p_;
    Egcd eg = extended_gcd(p_, rho_);  // p*x + rho*y = 1
    Complex sp = sums_p_.nu_moment(i + j, mod_reduce(static_cast<i128>(eg.y) * m1, p_),
                                   mod_reduce(static_cast<i128>(eg.y) * n1, p_));
    Complex ph = root_exp_sum(ctx_, rho_, mod_reduce(static_cast<i128>(eg.x) * m1, rho_),
                              mod_reduce(static_cast<i128>(eg.x) * n1, rho_));
    return static_cast<double>(p_) * static_cast<double>(p_) * sp * ph;
}

i128 JointSumEvaluator::zero_value(int i, int j) const {
    if (i < 0 || i > 2 || j < 0 || j > 2)
        throw std::invalid_argument("joint sums: i, j must lie in {0,1,2}");
    i128 phi = root_count(ctx_, rho_);
    if (p_ != q_)
        return static_cast<i128>(sums_p_.nu_moment_zero(i)) * sums_q_.nu_moment_zero(j) * phi;
    return static_cast<i128>(p_) * p_ * sums_p_.nu_moment_zero(i + j) * phi;
}

Complex joint_nu_sum_direct(const QuarticContext& ctx, i64 p, i64 q, int i, int j, i64 m,
                            i64 n) {
    return JointSumEvaluator(ctx, p, q).direct(i, j, m, n);
}

Complex joint_nu_sum_factored(const QuarticContext& ctx, i64 p, i64 q, int i, int j, i64 m,
                              i64 n) {
    return JointSumEvaluator(ctx, p, q).factored(i, j, m, n);
}

i128 joint_nu_sum_zero(const QuarticContext& ctx, i64 p, i64 q, int i, int j) {
    return JointSumEvaluator(ctx, p, q).zero_value(i, j);
}

// ---------------------------------------------------------------------------
// Box sums

i128 lattice_moment_sum(const QuarticContext& ctx, i64 B, i64 p, i64 q, int i, int j) {
    if (B < 0) throw std::invalid_argument("lattice_moment_sum: B must be nonnegative");
    LocalSums sums_p(ctx, p);
    LocalSums sums_q(ctx, q);
    RhoTables rt(ctx, ctx.rho);
    const i64 rmax = (2 * B) / ctx.h1, smax = (2 * B) / ctx.h2;
    i128 acc = 0;
    for (i64 r = 1; r <= rmax; ++r) {
        i64 rr = r % ctx.rho;
        if (!rt.unit[static_cast<std::size_t>(rr)]) continue;
        for (i64 s = 1; s <= smax; ++s) {
            i64 sr = s % ctx.rho;
            if (!rt.unit[static_cast<std::size_t>(sr)] ||
                rt.f_value[static_cast<std::size_t>(rr * ctx.rho + sr)] != 0)
                continue;
            acc += ipow_small(sums_p.nu(r, s), i) * ipow_small(sums_q.nu(r, s), j);
        }
    }
    return acc;
}

Complex lattice_moment_fourier(const QuarticContext& ctx, i64 B, i64 p, i64 q, int i, int j) {
    if (i < 0 || i > 2 || j < 0 || j > 2)
        throw std::invalid_argument("lattice_moment_fourier: i, j must lie in {0,1,2}");
    LocalSums sums_p(ctx, p);
    LocalSums sums_q(ctx, q);
    const i64 rho = ctx.rho;
    const i64 L = p * q * rho;
    if (L > kDirectModulusCap)
        throw std::invalid_argument("lattice_moment_fourier: p*q*rho beyond cap");
    std::vector<Complex> grid_p = sums_p.nu_moment_grid(i);
    std::vector<Complex> grid_q = sums_q.nu_moment_grid(j);
    std::vector<Complex> grid_rho = root_exp_sum_grid(ctx, rho);
    std::vector<Complex> gam1(static_cast<std::size_t>(L)), gam2(static_cast<std::size_t>(L));
    const double Y1 = 2.0 * static_cast<double>(B) / ctx.h1;
    const double Y2 = 2.0 * static_cast<double>(B) / ctx.h2;
    for (i64 k = 0; k < L; ++k) {
        gam1[static_cast<std::size_t>(k)] = geometric_phase_sum(Y1, k, L);
        gam2[static_cast<std::size_t>(k)] = geometric_phase_sum(Y2, k, L);
    }
    ComplexKahan acc;
    if (p != q) {
        Egcd eg = extended_gcd(p * q, rho);
        Egcd pr = extended_gcd(p, q);
        i64 tp = mod_reduce(static_cast<i128>(mod_reduce(eg.y, p)) * mod_reduce(pr.y, p), p);
        i64 tq = mod_reduce(static_cast<i128>(mod_reduce(eg.y, q)) * mod_reduce(pr.x, q), q);
        i64 tr = mod_reduce(eg.x, rho);
        for (i64 m = 0; m < L; ++m) {
            i64 mp = mod_reduce(static_cast<i128>(tp) * m, p);
            i64 mq = mod_reduce(static_cast<i128>(tq) * m, q);
            i64 mr = mod_reduce(static_cast<i128>(tr) * m, rho);
            Complex row{0.0, 0.0};
            for (i64 n = 0; n < L; ++n) {
                i64 np = mod_reduce(static_cast<i128>(tp) * n, p);
                i64 nq = mod_reduce(static_cast<i128>(tq) * n, q);
                i64 nr = mod_reduce(static_cast<i128>(tr) * n, rho);
                Complex psi = grid_p[static_cast<std::size_t>(mp * p + np)] *
                              grid_q[static_cast<std::size_t>(mq * q + nq)] *
                              grid_rho[static_cast<std::size_t>(mr * rho + nr)];
                row += gam1[static_cast<std::size_t>(m)] * gam2[static_cast<std::size_t>(n)] * psi;
            }
            acc.add(row);
        }
    } else {
        Egcd eg = extended_gcd(p, rho);
        std::vector<Complex> grid_sum = sums_p.nu_moment_grid(i + j);
        for (i64 m = 0; m < L; ++m) {
            if (m % p != 0) continue;
            i64 m1 = m / p;
            i64 mp = mod_reduce(static_cast<i128>(eg.y) * m1, p);
            i64 mr = mod_reduce(static_cast<i128>(eg.x) * m1, rho);
            Complex row{0.0, 0.0};
            for (i64 n = 0; n < L; ++n) {
                if (n % p != 0) continue;
                i64 n1 = n / p;
                i64 np = mod_reduce(static_cast<i128>(eg.y) * n1, p);
                i64 nr = mod_reduce(static_cast<i128>(eg.x) * n1, rho);
                Complex psi = static_cast<double>(p) * static_cast<double>(p) *
                              grid_sum[static_cast<std::size_t>(mp * p + np)] *
                              grid_rho[static_cast<std::size_t>(mr * rho + nr)];
                row += gam1[static_cast<std::size_t>(m)] * gam2[static_cast<std::size_t>(n)] * psi;
            }
            acc.add(row);
        }
    }
    double inv = 1.0 / (static_cast<double>(L) * static_cast<double>(L));
    return acc.value() * inv;
}

Rational main_term(const QuarticContext& ctx, i64 B, i64 p, i64 q, int i, int j) {
    i128 psi0 = joint_nu_sum_zero(ctx, p, q, i, j);
    BigInt num = to_bigint(psi0) * 4 * BigInt(B) * BigInt(B);
    BigInt den = BigInt(ctx.h1) * ctx.h2 * BigInt(p) * p * BigInt(q) * q * BigInt(ctx.rho) *
                 ctx.rho;
    return Rational(num, den);
}

Rational main_term_cancellation(const QuarticContext& ctx, i64 B, i64 p, i64 q) {
    JointSumEvaluator ev(ctx, p, q);
    Rational acc = 0;
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; j <= 2; ++j) {
            i128 psi0 = ev.zero_value(i, j);
            BigInt num = to_bigint(psi0) * 4 * BigInt(B) * BigInt(B) * coeff_c(i, j, 1, 3);
            BigInt den = BigInt(ctx.h1) * ctx.h2 * BigInt(p) * p * BigInt(q) * q *
                         BigInt(ctx.rho) * ctx.rho;
            acc += Rational(num, den);
        }
    return acc;
}

// ---------------------------------------------------------------------------
// Bound scans

namespace {

double rat_abs_double(const Rational& r) {
    Rational a = r < 0 ? Rational(-r) : r;
    return static_cast<double>(boost::multiprecision::numerator(a)) /
           static_cast<double>(boost::multiprecision::denominator(a));
}

void push_worst(BoundScanReport& report, ScanRow row) {
    if (row.ratio > report.worst_ratio) {
        report.worst_ratio = row.ratio;
        report.worst_witness = row.params;
    }
    report.rows.push_back(std::move(row));
}

// Deterministic twist sample for moduli too large for full grids.
std::vector<i64> twist_samples(i64 mod, i64 special) {
    std::vector<i64> vals{0, 1, 2, 3, 5, 7};
    if (special > 0) {
        vals.push_back(special % mod);
        vals.push_back((2 * special) % mod);
    }
    std::vector<i64> out;
    for (i64 v : vals) {
        out.push_back(mod_reduce(v, mod));
        out.push_back(mod_reduce(-v, mod));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

i128 delta_frequency(const QuarticContext& ctx, i64 M, i64 N, i64 mod) {
    i64 mc = centered_rep(M, mod), nc = centered_rep(N, mod);
    return checked_add(checked_mul(checked_mul(static_cast<i128>(ctx.h2), ctx.h2),
                                   checked_mul(static_cast<i128>(mc), mc)),
                       checked_mul(checked_mul(static_cast<i128>(ctx.h1), ctx.h1),
                                   checked_mul(static_cast<i128>(nc), nc)));
}

}  // namespace

BoundScanReport scan_nu_moments(const QuarticContext& ctx, i64 pmax) {
    BoundScanReport report;
    report.family = "nu-moments";
    report.range = "pool primes <= " + std::to_string(pmax);
    report.param_names = {"kind", "p", "t", "M", "N"};
    for (i64 p : build_prime_pool(ctx, pmax)) {
        LocalSums sums(ctx, p);
        for (int t = 0; t <= 2; ++t) {
            i64 zero = sums.nu_moment_zero(t);
            i64 main = std::max<i64>(1, t) * p * p;
            double value = static_cast<double>(zero > main ? zero - main : main - zero);
            ScanRow row{{0, p, t, 0, 0}, value, static_cast<double>(p),
                        value / static_cast<double>(p)};
            push_worst(report, std::move(row));
        }
        for (int t = 0; t <= 4; ++t) {
            auto grid = sums.nu_moment_grid(t);
            ScanRow worst;
            worst.ratio = -1.0;
            for (i64 M = 0; M < p; ++M)
                for (i64 N = 0; N < p; ++N) {
                    double value = std::abs(grid[static_cast<std::size_t>(M * p + N)]);
                    double env = static_cast<double>(p) *
                                 ((M == 0 && N == 0) ? static_cast<double>(p) : 1.0);
                    double ratio = value / env;
                    if (ratio > worst.ratio)
                        worst = ScanRow{{1, p, t, centered_rep(M, p), centered_rep(N, p)},
                                        value, env, ratio};
                }
            push_worst(report, std::move(worst));
        }
    }
    return report;
}

BoundScanReport scan_phi_prime(const QuarticContext& ctx, i64 pmax) {
    BoundScanReport report;
    report.family = "phi-prime";
    report.range = "odd primes <= " + std::to_string(pmax);
    report.param_names = {"p", "M", "N"};
    for (i64 p : primes_up_to(pmax)) {
        if (p == 2) continue;
        auto grid = root_exp_sum_grid(ctx, p);
        ScanRow worst;
        worst.ratio = -1.0;
        for (i64 M = 0; M < p; ++M)
            for (i64 N = 0; N < p; ++N) {
                double value = std::abs(grid[static_cast<std::size_t>(M * p + N)]);
                i128 delta = delta_frequency(ctx, M, N, p);
                i64 g = static_cast<i64>(gcd128(delta, p));
                double env = std::sqrt(static_cast<double>(p)) * std::sqrt(static_cast<double>(g));
                double ratio = value / env;
                if (ratio > worst.ratio)
                    worst = ScanRow{{p, centered_rep(M, p), centered_rep(N, p)}, value, env,
                                    ratio};
            }
        push_worst(report, std::move(worst));
    }
    return report;
}

BoundScanReport scan_phi_prime_power(const QuarticContext& ctx, i64 prime_power_max) {
    BoundScanReport report;
    report.family = "phi-prime-power";
    report.range = "prime powers p^k <= " + std::to_string(prime_power_max) + ", k >= 2";
    report.param_names = {"p", "k", "M", "N"};
    for (i64 p : primes_up_to(static_cast<i64>(std::sqrt(static_cast<double>(prime_power_max))) + 1)) {
        i64 pk = p * p;
        int k = 2;
        while (pk <= prime_power_max) {
            auto roots = constrained_roots(ctx, pk);
            auto phase = phase_table(pk);
            i64 half = 1;
            for (int e = 0; e < k / 2; ++e) half *= p;
            double env = static_cast<double>(pk) * static_cast<double>(gcd64(half, ctx.h1));
            auto samples = twist_samples(pk, half);
            ScanRow worst;
            worst.ratio = -1.0;
            for (i64 M : samples)
                for (i64 N : samples) {
                    ComplexKahan acc;
                    for (auto [r, s] : roots)
                        acc.add(phase[static_cast<std::size_t>(mod_reduce(
                            static_cast<i128>(M) * r + static_cast<i128>(N) * s, pk))]);
                    double value = std::abs(acc.value());
                    double ratio = value / env;
                    if (ratio > worst.ratio)
                        worst = ScanRow{{p, k, centered_rep(M, pk), centered_rep(N, pk)}, value,
                                        env, ratio};
                }
            push_worst(report, std::move(worst));
            if (pk > prime_power_max / p) break;
            pk *= p;
            ++k;
        }
    }
    return report;
}

BoundScanReport scan_phi_composite(const QuarticContext& ctx, i64 rho_max) {
    BoundScanReport report;
    report.family = "phi-composite";
    report.range = "moduli <= " + std::to_string(rho_max);
    report.param_names = {"rho", "M", "N"};
    for (i64 rho = 1; rho <= rho_max; ++rho) {
        UvwSplit split = decompose_uvw(rho);
        double base = std::sqrt(static_cast<double>(split.u)) * static_cast<double>(split.v) *
                      static_cast<double>(split.w) * static_cast<double>(split.w) *
                      static_cast<double>(gcd64(split.w, ctx.h1));
        ScanRow worst;
        worst.ratio = -1.0;
        auto eval_pair = [&](i64 M, i64 N, Complex value_c) {
            double value = std::abs(value_c);
            i128 delta = delta_frequency(ctx, M, N, rho);
            double env = base * std::sqrt(static_cast<double>(gcd128(delta, split.u)));
            double ratio = value / env;
            if (ratio > worst.ratio)
                worst = ScanRow{{rho, centered_rep(M, rho), centered_rep(N, rho)}, value, env,
                                ratio};
        };
        if (rho <= 60) {
            auto grid = root_exp_sum_grid(ctx, rho);
            for (i64 M = 0; M < rho; ++M)
                for (i64 N = 0; N < rho; ++N)
                    eval_pair(M, N, grid[static_cast<std::size_t>(M * rho + N)]);
        } else {
            auto samples = twist_samples(rho, split.w);
            for (i64 M : samples)
                for (i64 N : samples) eval_pair(M, N, root_exp_sum(ctx, rho, M, N));
        }
        push_worst(report, std::move(worst));
    }
    return report;
}

BoundScanReport scan_psi_main(const QuarticContext& ctx, i64 pmax) {
    BoundScanReport report;
    report.family = "psi-main";
    report.range = "pool prime pairs <= " + std::to_string(pmax);
    report.param_names = {"p", "q", "i", "j"};
    UvwSplit split = decompose_uvw(ctx.rho);
    auto pool = build_prime_pool(ctx, pmax);
    for (std::size_t a = 0; a < pool.size(); ++a)
        for (std::size_t b = a; b < pool.size(); ++b) {
            JointSumEvaluator ev(ctx, pool[a], pool[b]);
            double env = static_cast<double>(pool[a]) * pool[b];
            env = env * env * static_cast<double>(ctx.rho) *
                  static_cast<double>(gcd64(split.w, ctx.h1));
            for (int i = 0; i <= 2; ++i)
                for (int j = 0; j <= 2; ++j) {
                    i128 psi0 = ev.zero_value(i, j);
                    double value = std::abs(static_cast<double>(psi0));
                    ScanRow row{{pool[a], pool[b], i, j}, value, env, value / env};
                    push_worst(report, std::move(row));
                }
        }
    return report;
}

BoundScanReport scan_main_term_cancel(const QuarticContext& ctx, i64 pmax, i64 B) {
    BoundScanReport report;
    report.family = "main-term-cancel";
    report.range = "pool prime pairs <= " + std::to_string(pmax) + ", box " + std::to_string(B);
    report.param_names = {"p", "q"};
    auto pool = build_prime_pool(ctx, pmax);
    for (std::size_t a = 0; a < pool.size(); ++a)
        for (std::size_t b = 0; b < pool.size(); ++b) {
            if (a == b) continue;
            Rational cancel = main_term_cancellation(ctx, B, pool[a], pool[b]);
            double value = rat_abs_double(cancel);
            double env = static_cast<double>(B) * static_cast<double>(B) /
                         static_cast<double>(std::min(pool[a], pool[b]));
            ScanRow row{{pool[a], pool[b]}, value, env, value / env};
            push_worst(report, std::move(row));
        }
    return report;
}

std::vector<std::string> bound_scan_families() {
    return {"nu-moments",    "phi-prime", "phi-prime-power",
            "phi-composite", "psi-main",  "main-term-cancel"};
}

BoundScanReport bound_scan(const std::string& family, const QuarticContext& ctx,
                           const ScanRanges& ranges) {
    if (family == "nu-moments") return scan_nu_moments(ctx, ranges.pmax);
    if (family == "phi-prime") return scan_phi_prime(ctx, ranges.pmax);
    if (family == "phi-prime-power") return scan_phi_prime_power(ctx, ranges.prime_power_max);
    if (family == "phi-composite") return scan_phi_composite(ctx, ranges.rho_max);
    if (family == "psi-main") return scan_psi_main(ctx, ranges.pmax);
    if (family == "main-term-cancel")
        return scan_main_term_cancel(ctx, ranges.pmax, ranges.box);
    throw std::invalid_argument("bound_scan: unknown family '" + family + "'");
}

}  // namespace polysieve
