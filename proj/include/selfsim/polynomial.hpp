#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "selfsim/rational.hpp"

namespace selfsim {

// Univariate polynomial in the family parameter u, with exact rational
// coefficients. coeffs[k] is the coefficient of u^k; trailing zeros are
// stripped so the degree is canonical and == is coefficient-wise identity.
class RationalPoly {
public:
    RationalPoly() = default;
    explicit RationalPoly(Rational constant);
    explicit RationalPoly(std::vector<Rational> coeffs);
    RationalPoly(std::initializer_list<Rational> coeffs);

    static RationalPoly zero() { return RationalPoly(); }
    static RationalPoly constant(Rational c) { return RationalPoly(std::move(c)); }
    // The monomial u.
    static RationalPoly variable();

    bool is_zero() const { return coeffs_.empty(); }
    bool is_constant() const { return coeffs_.size() <= 1; }
    // Degree of the zero polynomial is -1.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    const std::vector<Rational>& coefficients() const { return coeffs_; }
    // Coefficient of u^k, zero beyond the degree.
    Rational coefficient(size_t k) const;

    Rational evaluate(const Rational& u) const;
    double evaluate(double u) const;

    RationalPoly derivative() const;

    // sum_k |c_k| * max(|lo|,|hi|)^k : a rigorous upper bound for
    // sup |p(u)| over u in [lo, hi].
    Rational abs_bound(const Rational& lo, const Rational& hi) const;

    RationalPoly operator+(const RationalPoly& o) const;
    RationalPoly operator-(const RationalPoly& o) const;
    RationalPoly operator*(const RationalPoly& o) const;
    RationalPoly operator*(const Rational& s) const;
    RationalPoly operator-() const;

    bool operator==(const RationalPoly& o) const { return coeffs_ == o.coeffs_; }

    // "c0, c1, ..." with exact fraction literals; "0" for the zero polynomial.
    std::string to_string() const;
    static RationalPoly parse(std::string_view text);

private:
    void trim();
    std::vector<Rational> coeffs_;
};

// Rank over Q of a dense rational matrix (Gaussian elimination, exact).
int rational_rank(std::vector<std::vector<Rational>> rows);

// p(u) rewritten as a polynomial in v where u = v + shift. Exercised by the
// rank-invariance tests: rank of a coefficient matrix is unchanged under
// this substitution.
RationalPoly shift_variable(const RationalPoly& p, const Rational& shift);

}  // namespace selfsim
