#include "polysieve/intpoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace polysieve {

IntPoly::IntPoly(std::vector<i64> coeffs) {
    std::size_t first = 0;
    while (first < coeffs.size() && coeffs[first] == 0) ++first;
    coeffs_.assign(coeffs.begin() + static_cast<std::ptrdiff_t>(first), coeffs.end());
}

IntPoly IntPoly::monomial_power(int degree) {
    if (degree < 0) throw std::invalid_argument("monomial_power: negative degree");
    std::vector<i64> c(static_cast<std::size_t>(degree) + 1, 0);
    c[0] = 1;
    return IntPoly(std::move(c));
}

i64 IntPoly::leading() const {
    if (coeffs_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
    return coeffs_.front();
}

i128 IntPoly::eval(i128 x) const {
    i128 acc = 0;
    for (i64 c : coeffs_) acc = checked_add(checked_mul(acc, x), c);
    return acc;
}

i128 IntPoly::cauchy_bound() const {
    if (coeffs_.empty()) throw std::logic_error("cauchy_bound of zero polynomial");
    i128 lead = abs128(coeffs_.front());
    i128 worst = 0;
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
        // ceil(|a_i| / |a_0|)
        i128 q = (abs128(coeffs_[i]) + lead - 1) / lead;
        worst = std::max(worst, q);
    }
    return 1 + worst;
}

std::string IntPoly::to_string() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    int deg = degree();
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        i64 c = coeffs_[i];
        if (c == 0) continue;
        int e = deg - static_cast<int>(i);
        if (!out.empty()) out += c > 0 ? " + " : " - ";
        else if (c < 0) out += "-";
        i64 ac = c < 0 ? -c : c;
        if (ac != 1 || e == 0) out += std::to_string(ac);
        if (e > 0) out += e == 1 ? "x" : "x^" + std::to_string(e);
    }
    return out.empty() ? "0" : out;
}

namespace {

constexpr i64 kDivisorFactorCap = 1'000'000'000'000LL;  // trial division feasible
constexpr i128 kScanCap = 1'000'000;

bool try_root(const IntPoly& poly, i64 x, std::optional<i64>& witness) {
    if (poly.eval(x) == 0) {
        witness = x;
        return true;
    }
    return false;
}

}  // namespace

std::optional<i64> integer_root(const IntPoly& poly) {
    if (poly.is_zero())
        throw std::invalid_argument("integer_root: polynomial vanishes identically");
    std::optional<i64> witness;
    i64 c = poly.constant_term();
    if (c == 0) {
        witness = 0;
        return witness;
    }
    i128 bound = poly.cauchy_bound();
    i64 ac = c < 0 ? -c : c;
    if (ac <= kDivisorFactorCap) {
        // Any integer root divides the constant term.
        for (i64 d = 1; d * d <= ac; ++d) {
            if (ac % d != 0) continue;
            for (i64 cand : {d, ac / d}) {
                if (static_cast<i128>(cand) > bound) continue;
                if (try_root(poly, cand, witness)) return witness;
                if (try_root(poly, -cand, witness)) return witness;
            }
        }
        return std::nullopt;
    }
    if (bound <= kScanCap) {
        for (i64 x = 1; x <= static_cast<i64>(bound); ++x) {
            if (try_root(poly, x, witness)) return witness;
            if (try_root(poly, -x, witness)) return witness;
        }
        return std::nullopt;
    }
    throw std::invalid_argument(
        "integer_root: constant term and root bound both beyond supported search range");
}

}  // namespace polysieve
