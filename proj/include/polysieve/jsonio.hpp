#ifndef POLYSIEVE_JSONIO_HPP
#define POLYSIEVE_JSONIO_HPP

#include <json.hpp>

#include <string>

#include "polysieve/counting.hpp"
#include "polysieve/quartic.hpp"
#include "polysieve/sieve.hpp"

namespace polysieve {

using Json = nlohmann::json;

// Family document schema (documented in the README):
//   {"m": 1, "d": 2,
//    "coeffs": [[[1]], [], [[-1, 1]]],      // one monomial list per c_i
//    "g": [[2, 1]]}
// A monomial is [coeff, e_1, ..., e_m]; an empty list is the zero
// polynomial.
MPoly mpoly_from_json(const Json& j, int vars);
Json mpoly_to_json(const MPoly& poly);

struct FamilyDocument {
    PolyFamily family;
    MPoly g;
};
FamilyDocument family_from_json(const Json& j);
Json family_to_json(const PolyFamily& family, const MPoly& g);

// Instance document: {"family": {...}, "alpha": 1, "primes": [3,5],
//  "support": [{"n": [2], "w": "1"}, {"n": [3], "w": "1/2"}]}
SieveInstance instance_from_json(const Json& j);
Json instance_to_json(const SieveInstance& inst);

Json sieve_report_to_json(const SieveReport& report);

Json transform_to_json(const TransformedSolution& ts, const Classification& cls);
Json census_to_json(const CensusResult& result);

}  // namespace polysieve

#endif
