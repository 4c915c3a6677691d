#ifndef POLYSIEVE_POLYFAM_HPP
#define POLYSIEVE_POLYFAM_HPP

#include <string>
#include <vector>

#include "polysieve/int128.hpp"
#include "polysieve/intpoly.hpp"
#include "polysieve/rational.hpp"

namespace polysieve {

// Sparse integer polynomial in m variables, stored as monomials
// (coefficient + exponent vector). m is small (1 or 2 in practice) so the
// explicit form is plenty.
struct Monomial {
    i64 coeff = 0;
    std::vector<int> exps;
};

class MPoly {
  public:
    MPoly() = default;
    MPoly(int vars, std::vector<Monomial> monomials);  // combines like terms

    static MPoly constant(int vars, i64 value);
    static MPoly variable(int vars, int index, i64 coeff = 1);

    int vars() const { return vars_; }
    bool is_zero() const { return monomials_.empty(); }
    const std::vector<Monomial>& monomials() const { return monomials_; }

    i128 eval(const std::vector<i64>& point) const;

  private:
    int vars_ = 0;
    std::vector<Monomial> monomials_;
};

// The sieved family f(x; y) = c_0(y) x^d + ... + c_d(y), with m auxiliary
// variables. c_0 must not vanish identically and d >= 1, m >= 1.
class PolyFamily {
  public:
    PolyFamily(int m, int d, std::vector<MPoly> coeff_polys);

    int aux_vars() const { return m_; }
    int degree() const { return d_; }
    const std::vector<MPoly>& coeff_polys() const { return coeffs_; }

    // The univariate polynomial f(x; n) (may drop degree or vanish).
    IntPoly specialize(const std::vector<i64>& n) const;

  private:
    int m_;
    int d_;
    std::vector<MPoly> coeffs_;
};

// gcd(c_0(n), ..., c_d(n)) >= 0; zero iff every coefficient vanishes at n.
i128 h_gcd(const PolyFamily& family, const std::vector<i64>& n);

// nu_p(n) = #{x mod p : f(x; n) = 0 mod p}. Returns p when the reduction
// vanishes identically (callers filter those n through h_gcd).
i64 nu_p(const PolyFamily& family, const std::vector<i64>& n, i64 p);

// The family x^d - y together with its companion polynomial g(y) = d y.
struct PowerFamily {
    PolyFamily family;
    MPoly g;
};
PowerFamily power_family(int d);

// Finite nonnegative-rational weighting on points of Z^m.
struct WeightedPoint {
    std::vector<i64> point;
    Rational weight;
};

struct Weighting {
    std::vector<WeightedPoint> support;

    Rational total() const;
};

}  // namespace polysieve

#endif
