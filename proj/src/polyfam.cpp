#include "polysieve/polyfam.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "polysieve/modarith.hpp"

namespace polysieve {

MPoly::MPoly(int vars, std::vector<Monomial> monomials) : vars_(vars) {
    if (vars < 0) throw std::invalid_argument("MPoly: negative variable count");
    std::map<std::vector<int>, i64> combined;
    for (auto& mono : monomials) {
        if (static_cast<int>(mono.exps.size()) != vars)
            throw std::invalid_argument("MPoly: exponent vector length mismatch");
        for (int e : mono.exps)
            if (e < 0) throw std::invalid_argument("MPoly: negative exponent");
        combined[mono.exps] += mono.coeff;
    }
    for (auto& [exps, coeff] : combined)
        if (coeff != 0) monomials_.push_back({coeff, exps});
}

MPoly MPoly::constant(int vars, i64 value) {
    return MPoly(vars, {Monomial{value, std::vector<int>(static_cast<std::size_t>(vars), 0)}});
}

MPoly MPoly::variable(int vars, int index, i64 coeff) {
    if (index < 0 || index >= vars) throw std::invalid_argument("MPoly: variable index");
    std::vector<int> exps(static_cast<std::size_t>(vars), 0);
    exps[static_cast<std::size_t>(index)] = 1;
    return MPoly(vars, {Monomial{coeff, exps}});
}

i128 MPoly::eval(const std::vector<i64>& point) const {
    if (static_cast<int>(point.size()) != vars_)
        throw std::invalid_argument("MPoly::eval: point dimension mismatch");
    i128 acc = 0;
    for (const auto& mono : monomials_) {
        i128 term = mono.coeff;
        for (int v = 0; v < vars_; ++v)
            for (int e = 0; e < mono.exps[static_cast<std::size_t>(v)]; ++e)
                term = checked_mul(term, point[static_cast<std::size_t>(v)]);
        acc = checked_add(acc, term);
    }
    return acc;
}

PolyFamily::PolyFamily(int m, int d, std::vector<MPoly> coeff_polys)
    : m_(m), d_(d), coeffs_(std::move(coeff_polys)) {
    if (m < 1) throw std::invalid_argument("PolyFamily: need at least one auxiliary variable");
    if (d < 1) throw std::invalid_argument("PolyFamily: degree must be >= 1");
    if (static_cast<int>(coeffs_.size()) != d + 1)
        throw std::invalid_argument("PolyFamily: expected d+1 coefficient polynomials");
    for (const auto& c : coeffs_)
        if (c.vars() != m)
            throw std::invalid_argument("PolyFamily: coefficient variable count mismatch");
    if (coeffs_.front().is_zero())
        throw std::invalid_argument("PolyFamily: c_0 vanishes identically");
}

IntPoly PolyFamily::specialize(const std::vector<i64>& n) const {
    std::vector<i64> c(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        i128 v = coeffs_[i].eval(n);
        if (v > INT64_MAX || v < INT64_MIN)
            throw std::overflow_error("PolyFamily::specialize: coefficient out of range");
        c[i] = static_cast<i64>(v);
    }
    return IntPoly(std::move(c));
}

i128 h_gcd(const PolyFamily& family, const std::vector<i64>& n) {
    i128 g = 0;
    for (const auto& c : family.coeff_polys()) g = gcd128(g, c.eval(n));
    return g;
}

i64 nu_p(const PolyFamily& family, const std::vector<i64>& n, i64 p) {
    if (!is_prime(p)) throw std::invalid_argument("nu_p: p must be prime");
    std::vector<i64> reduced(family.coeff_polys().size());
    for (std::size_t i = 0; i < reduced.size(); ++i)
        reduced[i] = mod_reduce(family.coeff_polys()[i].eval(n), p);
    return count_roots_mod(reduced, p);
}

PowerFamily power_family(int d) {
    if (d < 2) throw std::invalid_argument("power_family: degree must be >= 2");
    std::vector<MPoly> coeffs;
    coeffs.push_back(MPoly::constant(1, 1));  // c_0 = 1
    for (int i = 1; i < d; ++i) coeffs.push_back(MPoly(1, {}));
    coeffs.push_back(MPoly::variable(1, 0, -1));  // c_d = -y
    return {PolyFamily(1, d, std::move(coeffs)), MPoly::variable(1, 0, d)};
}

Rational Weighting::total() const {
    Rational sum = 0;
    for (const auto& wp : support) sum += wp.weight;
    return sum;
}

}  // namespace polysieve
