#include <doctest.h>

#include "selfsim/family.hpp"
#include "selfsim/mwc64.hpp"
#include "selfsim/polynomial.hpp"

using namespace selfsim;

namespace {

Rational rnd_rational(Mwc64& rng) {
    long num = static_cast<long>(rng.next_below(19)) - 9;
    long den = 1 + rng.next_below(7);
    return make_rational(num, den);
}

RationalPoly rnd_poly(Mwc64& rng, int max_deg) {
    std::vector<Rational> c(1 + rng.next_below(max_deg + 1));
    for (auto& x : c) x = rnd_rational(rng);
    return RationalPoly(std::move(c));
}

AffineMapSpec rnd_map(Mwc64& rng) { return {rnd_poly(rng, 2), rnd_poly(rng, 2)}; }

}  // namespace

TEST_SUITE("polynomial") {

TEST_CASE("canonical form strips trailing zeros") {
    RationalPoly p({Rational(1), Rational(0), Rational(0)});
    CHECK(p.degree() == 0);
    CHECK(p.is_constant());
    CHECK(RationalPoly().is_zero());
    CHECK(RationalPoly().degree() == -1);
    CHECK(RationalPoly({Rational(0)}).is_zero());
}

TEST_CASE("string round trip") {
    RationalPoly p = RationalPoly::parse("1/2, -3, 0, 5/7");
    CHECK(p.degree() == 3);
    CHECK(p.coefficient(0) == Rational(1, 2));
    CHECK(p.coefficient(3) == Rational(5, 7));
    CHECK(RationalPoly::parse(p.to_string()) == p);
    CHECK(RationalPoly().to_string() == "0");
}

TEST_CASE("evaluation is exact") {
    RationalPoly p = RationalPoly::parse("1, -2, 1");  // (u-1)^2
    CHECK(p.evaluate(Rational(3)) == Rational(4));
    CHECK(p.evaluate(Rational(1, 2)) == Rational(1, 4));
    CHECK(p.derivative() == RationalPoly::parse("-2, 2"));
}

TEST_CASE("compose of constant-ratio maps") {
    AffineMapSpec a{RationalPoly::constant(Rational(1, 3)), RationalPoly::zero()};
    AffineMapSpec c = compose(a, a);
    CHECK(c.ratio == RationalPoly::constant(Rational(1, 9)));
    CHECK(c.translation.is_zero());
}

TEST_CASE("compose with polynomial entries") {
    AffineMapSpec a{RationalPoly::variable(), RationalPoly::variable()};
    AffineMapSpec b{RationalPoly::variable(), RationalPoly::constant(Rational(1))};
    AffineMapSpec c = compose(a, b);
    CHECK(c.ratio == RationalPoly({Rational(0), Rational(0), Rational(1)}));
    CHECK(c.translation == RationalPoly({Rational(0), Rational(2)}));
}

TEST_CASE("compose is associative") {
    Mwc64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        AffineMapSpec a = rnd_map(rng), b = rnd_map(rng), c = rnd_map(rng);
        AffineMapSpec lhs = compose(a, compose(b, c));
        AffineMapSpec rhs = compose(compose(a, b), c);
        CHECK(lhs.ratio == rhs.ratio);
        CHECK(lhs.translation == rhs.translation);
    }
}

TEST_CASE("evaluate commutes with compose") {
    Mwc64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        AffineMapSpec a = rnd_map(rng), b = rnd_map(rng);
        Rational u = rnd_rational(rng);
        AffineMapSpec c = compose(a, b);
        Rational ra = a.ratio.evaluate(u), ta = a.translation.evaluate(u);
        Rational rb = b.ratio.evaluate(u), tb = b.translation.evaluate(u);
        CHECK(c.ratio.evaluate(u) == ra * rb);
        CHECK(c.translation.evaluate(u) == ra * tb + ta);
    }
}

TEST_CASE("rational rank") {
    auto q = [](long a, long b) { return make_rational(a, b); };
    CHECK(rational_rank({{q(1, 1), q(0, 1)}, {q(0, 1), q(1, 1)}}) == 2);
    CHECK(rational_rank({{q(2, 1)}, {q(3, 1)}}) == 1);
    // Vandermonde-style rows for translations 1, u, u^2, u^3.
    std::vector<std::vector<Rational>> rows(4, std::vector<Rational>(4, Rational(0)));
    for (int i = 0; i < 4; ++i) rows[i][i] = Rational(1);
    CHECK(rational_rank(rows) == 4);
    CHECK(rational_rank({{q(1, 2), q(1, 3)}, {q(3, 2), q(1, 1)}}) == 1);  // proportional
}

TEST_CASE("variable shift") {
    RationalPoly p = RationalPoly::parse("0, 0, 1");  // u^2
    CHECK(shift_variable(p, Rational(1)) == RationalPoly::parse("1, 2, 1"));
    Mwc64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        RationalPoly q = rnd_poly(rng, 3);
        Rational s = rnd_rational(rng), u = rnd_rational(rng);
        Rational lhs = shift_variable(q, s).evaluate(u);
        Rational uu = u + s;
        CHECK(lhs == q.evaluate(uu));
    }
}

TEST_CASE("abs bound dominates samples") {
    Mwc64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        RationalPoly p = rnd_poly(rng, 3);
        Rational lo = make_rational(-2), hi = make_rational(3, 2);
        Rational bound = p.abs_bound(lo, hi);
        for (int g = 0; g <= 8; ++g) {
            Rational u = lo + (hi - lo) * Rational(g, 8);
            CHECK(rational_abs(p.evaluate(u)) <= bound);
        }
    }
}

}  // TEST_SUITE
