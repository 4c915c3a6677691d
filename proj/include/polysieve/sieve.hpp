#ifndef POLYSIEVE_SIEVE_HPP
#define POLYSIEVE_SIEVE_HPP

#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "polysieve/polyfam.hpp"
#include "polysieve/rational.hpp"

namespace polysieve {

// Coefficient table of the two-prime sieve inequality:
//   (0,0) -> (alpha-d)^2        (1,0),(0,1) -> alpha+(alpha-1)d-d^2
//   (1,1) -> (1+d)^2            (2,0),(0,2) -> -alpha+d
//   (2,1),(1,2) -> -1-d         (2,2)       -> 1
i64 coeff_c(int i, int j, i64 alpha, i64 d);

// alpha + (nu-1)(d-nu); >= alpha whenever 1 <= nu <= d.
i64 weight_factor(i64 nu, i64 alpha, i64 d);

// A fully validated sieve instance: family, auxiliary polynomial g,
// weighting, alpha and the prime set. Construction rejects instances whose
// support violates either support condition (nonzero weight where
// g(n)h(n) = 0, or |n| >= exp(#primes)).
class SieveInstance {
  public:
    SieveInstance(PolyFamily family, MPoly g, Weighting weighting, i64 alpha,
                  std::vector<i64> primes);

    const PolyFamily& family() const { return family_; }
    const MPoly& g() const { return g_; }
    const Weighting& weighting() const { return weighting_; }
    i64 alpha() const { return alpha_; }
    const std::vector<i64>& primes() const { return primes_; }
    i64 prime_count() const { return static_cast<i64>(primes_.size()); }

    // Cached per-point data (computed lazily on first use).
    const std::vector<std::vector<i64>>& nu_table() const;       // point x prime
    const std::vector<std::vector<char>>& divides_table() const; // p | g(n)h(n)
    const std::vector<char>& gh_zero() const;

  private:
    PolyFamily family_;
    MPoly g_;
    Weighting weighting_;
    i64 alpha_;
    std::vector<i64> primes_;

    mutable bool tables_ready_ = false;
    mutable std::vector<std::vector<i64>> nu_;
    mutable std::vector<std::vector<char>> divides_;
    mutable std::vector<char> gh_zero_;
    void build_tables() const;
};

// S_{i,j}(p,q) = sum over support, filtered by gcd(pq, g(n)h(n)) = 1, of
// w(n) nu_p(n)^i nu_q(n)^j. Exact.
Rational s_ij(const SieveInstance& inst, int i, int j, i64 p, i64 q);

// The squared-sum quantity: sum_n w(n) (sum_{p: p coprime to g(n)h(n)}
// weight_factor(nu_p(n)))^2. Exact.
Rational sigma_direct(const SieveInstance& inst);

// Both routes to the same number: (sigma_direct, sum_{p,q} sum_{i,j}
// c_{i,j}(alpha) S_{i,j}(p,q)). They must be exactly equal.
std::pair<Rational, Rational> expansion_check(const SieveInstance& inst);

struct SieveReport {
    Rational s_of_a;        // weighted count of n with f(x;n) soluble
    Rational bound_value;   // (1/P^2) sum_{p,q} |sum_{i,j} c_{i,j} S_{i,j}|
    Rational sigma;         // sigma_direct
    std::map<std::tuple<i64, i64, int, int>, Rational> sij_table;
    // min over counted n of (P - #{p in P : p | g(n)h(n)}), and the exact
    // inequality sigma >= s_of_a * min_clean^2 that the proof chain gives.
    i64 min_clean = 0;
    bool lower_bound_holds = true;
};

SieveReport sieve_bound(const SieveInstance& inst, int workers = 0);

// d = 2 specialization against its closed form. Returns the pair
//   ( sum_{i,j} c_{i,j}(alpha) nu_p^i nu_q^j ,
//     (alpha-1)^2 + (alpha-1)[(n/p)+(n/q)] + (n/pq) );
// the two must be equal whenever gcd(pq, 2n) = 1.
std::pair<i64, i64> square_sieve_identity(i64 n, i64 p, i64 q, i64 alpha);

}  // namespace polysieve

#endif
