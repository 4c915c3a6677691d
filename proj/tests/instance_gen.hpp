#ifndef POLYSIEVE_TESTS_INSTANCE_GEN_HPP
#define POLYSIEVE_TESTS_INSTANCE_GEN_HPP

// Seeded random sieve instances shared by the unit and acceptance suites.

#include <random>
#include <set>
#include <algorithm>

#include "polysieve/sieve.hpp"
#include "polysieve/modarith.hpp"

namespace polysieve::testgen {

inline MPoly random_mpoly(std::mt19937& rng, int vars, bool force_nonzero) {
    std::uniform_int_distribution<i64> coeff(-4, 4);
    std::uniform_int_distribution<int> exp(0, 2);
    std::uniform_int_distribution<int> terms(1, 3);
    std::vector<Monomial> monos;
    int t = terms(rng);
    for (int i = 0; i < t; ++i) {
        Monomial m;
        m.coeff = coeff(rng);
        for (int v = 0; v < vars; ++v) m.exps.push_back(exp(rng));
        monos.push_back(std::move(m));
    }
    MPoly out(vars, std::move(monos));
    if (force_nonzero && out.is_zero()) return MPoly::constant(vars, 1 + (coeff(rng) & 3));
    return out;
}

// A valid instance: m in {1,2}, d in {2,3,4}, |support| <= max_support,
// primes drawn below 50 with enough of them that exp(P) clears the
// coordinate box, weights rational with denominators <= 10^6.
inline SieveInstance random_instance(std::uint32_t seed, int max_support = 200) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick_m(1, 2), pick_d(2, 4);
    const int m = pick_m(rng), d = pick_d(rng);

    std::vector<MPoly> coeffs;
    coeffs.push_back(random_mpoly(rng, m, true));
    for (int i = 1; i <= d; ++i) coeffs.push_back(random_mpoly(rng, m, false));
    PolyFamily family(m, d, std::move(coeffs));
    MPoly g = random_mpoly(rng, m, true);

    auto all_primes = primes_up_to(50);
    std::shuffle(all_primes.begin(), all_primes.end(), rng);
    std::uniform_int_distribution<std::size_t> nprimes(6, all_primes.size());
    std::vector<i64> primes(all_primes.begin(),
                            all_primes.begin() + static_cast<std::ptrdiff_t>(nprimes(rng)));

    // exp(6) > 403, so coordinates up to 100 always satisfy the support cap.
    std::uniform_int_distribution<i64> coord(-100, 100);
    std::uniform_int_distribution<int> nsupport(0, max_support);
    std::uniform_int_distribution<i64> wnum(0, 1000);
    std::uniform_int_distribution<i64> wden(1, 1000000);
    Weighting weighting;
    std::set<std::vector<i64>> seen;
    int target = nsupport(rng);
    i64 den = wden(rng);
    for (int i = 0; i < target; ++i) {
        std::vector<i64> n;
        for (int v = 0; v < m; ++v) n.push_back(coord(rng));
        if (!seen.insert(n).second) continue;
        if (g.eval(n) == 0 || h_gcd(family, n) == 0) continue;  // forced w = 0: drop
        weighting.support.push_back({n, Rational(wnum(rng), den)});
    }
    std::uniform_int_distribution<i64> alpha_pick(1, 3);
    return SieveInstance(std::move(family), std::move(g), std::move(weighting),
                         alpha_pick(rng), std::move(primes));
}

}  // namespace polysieve::testgen

#endif
