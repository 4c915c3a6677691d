#ifndef POLYSIEVE_COUNTING_HPP
#define POLYSIEVE_COUNTING_HPP

#include <map>
#include <vector>

#include "polysieve/intpoly.hpp"
#include "polysieve/quartic.hpp"

namespace polysieve {

// Ordered representation counts r(n) = #{(y,z) positive : f(y)+f(z) = n}
// for all n <= N, sparse. Requires f increasing on the positive integers.
std::map<i128, i64> r_table(const IntPoly& f, i128 N);

// Ordered quadruples (y1..y4) in [1,B]^4 with f(y1)+f(y2) = f(y3)+f(y4) and
// {y1,y2} != {y3,y4}, by sorted pair-sum collision groups. Deterministic
// for every worker count.
i64 count_E(const IntPoly& f, i64 B, int workers = 0);

struct MomentReport {
    i128 N = 0;
    i64 R = 0;      // sum of r(n) for n <= N
    i64 R2 = 0;     // sum of r(n)^2
    i64 D = 0;      // #{y > 0 : 2 f(y) <= N}
    i64 Estar = 0;  // nontrivial ordered quadruples with value sum <= N
};

// Exact moment counts; the combinatorial identity R2 = 2R - D + Estar is
// recomputed from independently accumulated tallies before returning.
MomentReport moments(const IntPoly& f, i128 N);

struct GrowthRow {
    i64 B = 0;
    i64 E = 0;
    double e_over_b2 = 0.0;
    double e_over_b_five_sixths = 0.0;  // E / B^(2 - 1/6)
};

std::vector<GrowthRow> growth_scan(const IntPoly& f, const std::vector<i64>& b_list,
                                   int workers = 0);

struct CensusRecord {
    TransformedSolution solution;
    Classification classification;
    i64 orbit = 0;  // ordered quadruples represented by this class pair
};

struct CensusResult {
    i64 n1 = 0;
    i64 n2 = 0;
    i64 degenerate = 0;     // u1 = v1 leftover family, reported separately
    i64 unclassified = 0;   // canonical ordering failed (non-injective f only)
    i64 total = 0;          // = count_E(f, B), reconciled internally
    std::vector<CensusRecord> records;
};

CensusResult census_n1_n2(QuarticParams params, i64 B, i64 C, i64 H);

}  // namespace polysieve

#endif
