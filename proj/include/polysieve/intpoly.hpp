#ifndef POLYSIEVE_INTPOLY_HPP
#define POLYSIEVE_INTPOLY_HPP

#include <optional>
#include <string>
#include <vector>

#include "polysieve/int128.hpp"

namespace polysieve {

// Dense univariate integer polynomial, coefficients leading-first
// (constant term last). The zero polynomial is the empty list; a nonzero
// polynomial always has a nonzero leading coefficient.
class IntPoly {
  public:
    IntPoly() = default;
    explicit IntPoly(std::vector<i64> coeffs);  // trims leading zeros

    static IntPoly monomial_power(int degree);  // x^degree

    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<i64>& coeffs() const { return coeffs_; }
    i64 leading() const;
    i64 constant_term() const { return coeffs_.empty() ? 0 : coeffs_.back(); }

    i128 eval(i128 x) const;  // checked 128-bit Horner

    // Ceiling of 1 + max_i |a_i / a_0|; every integer root lies within it.
    i128 cauchy_bound() const;

    std::string to_string() const;

  private:
    std::vector<i64> coeffs_;
};

// True iff there is an integer x with poly(x) = 0; returns a witness root.
// The identically-zero polynomial is rejected.
std::optional<i64> integer_root(const IntPoly& poly);
inline bool has_integer_root(const IntPoly& poly) { return integer_root(poly).has_value(); }

}  // namespace polysieve

#endif
