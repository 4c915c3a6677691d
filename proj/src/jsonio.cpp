#include "polysieve/jsonio.hpp"

#include <stdexcept>

namespace polysieve {

MPoly mpoly_from_json(const Json& j, int vars) {
    if (!j.is_array()) throw std::invalid_argument("polynomial document must be an array");
    std::vector<Monomial> monos;
    for (const auto& item : j) {
        if (!item.is_array() || item.empty() ||
            static_cast<int>(item.size()) != vars + 1)
            throw std::invalid_argument("monomial must be [coeff, e_1, ..., e_m]");
        Monomial m;
        m.coeff = item[0].get<i64>();
        for (int v = 1; v <= vars; ++v) m.exps.push_back(item[static_cast<std::size_t>(v)].get<int>());
        monos.push_back(std::move(m));
    }
    return MPoly(vars, std::move(monos));
}

Json mpoly_to_json(const MPoly& poly) {
    Json out = Json::array();
    for (const auto& m : poly.monomials()) {
        Json mono = Json::array();
        mono.push_back(m.coeff);
        for (int e : m.exps) mono.push_back(e);
        out.push_back(std::move(mono));
    }
    return out;
}

FamilyDocument family_from_json(const Json& j) {
    int m = j.at("m").get<int>();
    int d = j.at("d").get<int>();
    const auto& coeffs = j.at("coeffs");
    if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != d + 1)
        throw std::invalid_argument("family document needs d+1 coefficient polynomials");
    std::vector<MPoly> cs;
    for (const auto& c : coeffs) cs.push_back(mpoly_from_json(c, m));
    MPoly g = mpoly_from_json(j.at("g"), m);
    return {PolyFamily(m, d, std::move(cs)), std::move(g)};
}

Json family_to_json(const PolyFamily& family, const MPoly& g) {
    Json out;
    out["m"] = family.aux_vars();
    out["d"] = family.degree();
    Json coeffs = Json::array();
    for (const auto& c : family.coeff_polys()) coeffs.push_back(mpoly_to_json(c));
    out["coeffs"] = std::move(coeffs);
    out["g"] = mpoly_to_json(g);
    return out;
}

SieveInstance instance_from_json(const Json& j) {
    FamilyDocument doc = family_from_json(j.at("family"));
    i64 alpha = j.at("alpha").get<i64>();
    std::vector<i64> primes = j.at("primes").get<std::vector<i64>>();
    Weighting weighting;
    for (const auto& entry : j.at("support")) {
        WeightedPoint wp;
        wp.point = entry.at("n").get<std::vector<i64>>();
        const auto& w = entry.at("w");
        wp.weight = w.is_string() ? rational_from_string(w.get<std::string>())
                                  : Rational(w.get<i64>());
        weighting.support.push_back(std::move(wp));
    }
    return SieveInstance(std::move(doc.family), std::move(doc.g), std::move(weighting), alpha,
                         std::move(primes));
}

Json instance_to_json(const SieveInstance& inst) {
    Json out;
    out["family"] = family_to_json(inst.family(), inst.g());
    out["alpha"] = inst.alpha();
    out["primes"] = inst.primes();
    Json support = Json::array();
    for (const auto& wp : inst.weighting().support) {
        Json entry;
        entry["n"] = wp.point;
        entry["w"] = rational_to_string(wp.weight);
        support.push_back(std::move(entry));
    }
    out["support"] = std::move(support);
    return out;
}

Json sieve_report_to_json(const SieveReport& report) {
    Json out;
    out["s_of_a"] = rational_to_string(report.s_of_a);
    out["bound_value"] = rational_to_string(report.bound_value);
    out["sigma"] = rational_to_string(report.sigma);
    out["min_clean"] = report.min_clean;
    out["lower_bound_holds"] = report.lower_bound_holds;
    Json table = Json::array();
    for (const auto& [key, value] : report.sij_table) {
        auto [p, q, i, j] = key;
        Json row;
        row["p"] = p;
        row["q"] = q;
        row["i"] = i;
        row["j"] = j;
        row["value"] = rational_to_string(value);
        table.push_back(std::move(row));
    }
    out["sij"] = std::move(table);
    return out;
}

Json transform_to_json(const TransformedSolution& ts, const Classification& cls) {
    Json out;
    out["a"] = ts.params.a;
    out["b"] = ts.params.b;
    out["y"] = ts.original;
    out["u1"] = ts.intermediate[0];
    out["u2"] = ts.intermediate[1];
    out["v1"] = ts.intermediate[2];
    out["v2"] = ts.intermediate[3];
    out["h1"] = ts.h1;
    out["h2"] = ts.h2;
    out["r"] = ts.r;
    out["s"] = ts.s;
    out["rho"] = ts.rho;
    out["sigma"] = ts.sigma;
    out["reduced_lhs"] = to_string_i128(ts.reduced_lhs);
    out["reduced_rhs"] = to_string_i128(ts.reduced_rhs);
    out["A"] = to_string_i128(cls.A);
    out["max_h"] = cls.max_h;
    out["class"] = cls.cls == SolutionClass::N1 ? "N1" : "N2";
    out["reduced_predicate"] = cls.reduced_predicate;
    return out;
}

Json census_to_json(const CensusResult& result) {
    Json out;
    out["n1"] = result.n1;
    out["n2"] = result.n2;
    out["degenerate"] = result.degenerate;
    out["unclassified"] = result.unclassified;
    out["total"] = result.total;
    Json records = Json::array();
    for (const auto& rec : result.records) {
        Json r = transform_to_json(rec.solution, rec.classification);
        r["orbit"] = rec.orbit;
        records.push_back(std::move(r));
    }
    out["records"] = std::move(records);
    return out;
}

}  // namespace polysieve
