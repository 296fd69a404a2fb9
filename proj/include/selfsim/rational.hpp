#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace selfsim {

// Exact rational scalar. mpq_class keeps the canonical form we rely on
// everywhere: lowest terms, positive denominator.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Parses "p/q" or "p" (arbitrary precision, optional leading '-').
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty())
        throw std::invalid_argument("empty rational literal");
    Rational r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    if (r.get_den() == 0)
        throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

inline Rational rational_pow(const Rational& base, unsigned long exp) {
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exp);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exp);
    return out;
}

inline BigInt bigint_pow(const BigInt& base, unsigned long exp) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
    return out;
}

inline Rational rational_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

}  // namespace selfsim
