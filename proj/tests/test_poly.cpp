#include "rham/poly.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rham;

namespace {
Poly X() { return Poly::var(kSymX); }
Poly Y() { return Poly::var(kSymY); }
Poly Z() { return Poly::var(kSymZ); }
}  // namespace

TEST_CASE("rational scalars are always normalized") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1) / Rational(-2) == Rational(-1, 2));
    CHECK(denominator(Rational(1) / Rational(-2)) == 2);
    CHECK(numerator(Rational(1) / Rational(-2)) == -1);
    CHECK(Rational(1, 3) + Rational(-2, 6) == 0);
    CHECK(denominator(Rational(0)) == 1);
    CHECK(rational_pow(Rational(2, 3), 3) == Rational(8, 27));
    CHECK(exact_sqrt(Rational(9, 16)) == Rational(3, 4));
    CHECK_THROWS_AS(exact_sqrt(Rational(1, 2)), Error);
    CHECK_THROWS_AS(exact_sqrt(Rational(-4)), Error);
}

TEST_CASE("monomial order is graded lexicographic with x > y > z > params") {
    CHECK(Monomial::cmp(Monomial::of(kSymX), Monomial::of(kSymY)) > 0);
    CHECK(Monomial::cmp(Monomial::of(kSymY), Monomial::of(kSymZ)) > 0);
    CHECK(Monomial::cmp(Monomial::of(kSymZ), Monomial::of(sym("a"))) > 0);
    CHECK(Monomial::cmp(Monomial::of(sym("a")), Monomial::of(sym("b"))) > 0);
    // degree dominates precedence
    CHECK(Monomial::cmp(Monomial::of(sym("g"), 2), Monomial::of(kSymX)) > 0);
    CHECK(Monomial::cmp(Monomial::of(kSymX, 2), Monomial::of(kSymX).times(Monomial::of(kSymY))) >
          0);
}

TEST_CASE("polynomial arithmetic is exact and canonical") {
    Poly a = X() + Y();
    Poly b = X() - Y();
    CHECK(a * b == X() * X() - Y() * Y());

    Poly g = Poly::var(sym("g")), d = Poly::var(sym("d"));
    CHECK((2 * Y() - d) * -g == Rational(-2) * g * Y() + d * g);

    CHECK((X() + Poly(1)).pow(3) ==
          X().pow(3) + 3 * X() * X() + 3 * X() + Poly(1));

    Poly zero = a - a;
    CHECK(zero.is_zero());
    CHECK(zero.term_count() == 0);

    // tiny coefficients cancel exactly
    CHECK((Rational(1, 3) * X() + Rational(-2, 6) * X()).is_zero());
}

TEST_CASE("differentiation handles variables only") {
    Poly g = Poly::var(sym("g"));
    Poly p = 2 * Z() * Z() - Rational(1, 2) * g * Z();
    CHECK(p.diff(kSymZ) == 4 * Z() - Rational(1, 2) * g);
    CHECK(p.diff(kSymX).is_zero());
    CHECK_THROWS_AS(p.diff(sym("g")), Error);
    CHECK_THROWS_AS(p.diff(sym("lam")), Error);
}

TEST_CASE("evaluation binds every symbol or fails") {
    Poly a = Poly::var(sym("a")), b = Poly::var(sym("b")), g = Poly::var(sym("g"));
    Poly p = -a - b + g;
    std::map<SymId, Rational> vals{{sym("a"), 35}, {sym("b"), 3}, {sym("g"), 28}};
    CHECK(p.eval_exact(vals) == -10);

    std::map<SymId, double> dvals{{sym("a"), 35.0}, {sym("b"), 3.0}, {sym("g"), 28.0}};
    CHECK(p.eval(dvals) == -10.0);

    std::map<SymId, Rational> missing{{sym("a"), 35}};
    CHECK_THROWS_AS(p.eval_exact(missing), Error);

    Poly q = Rational(1, 2) * X() * X() + a;
    CHECK(q.eval_exact({{kSymX, Rational(3)}, {sym("a"), Rational(1, 2)}}) == Rational(5));
}

TEST_CASE("substitution composes polynomials") {
    Poly p = X() + Y();
    CHECK(p.subst({{kSymX, Z() * Z()}}) == Z() * Z() + Y());

    Poly b = Poly::var(sym("b")), g = Poly::var(sym("g"));
    Poly q = b * Y() * Y() * Z();
    CHECK(q.subst({{sym("b"), g}}) == g * Y() * Y() * Z());

    // bind to a constant
    CHECK(q.subst({{sym("b"), Poly(0)}}).is_zero());
}

TEST_CASE("the adjoined radical squares to 1 - D^2") {
    Poly s = Poly::var(radical_sym());
    Poly D = Poly::var(delta_sym());
    CHECK(s * s == Poly(1) - D * D);
    CHECK((D + s) * (D - s) == 2 * D * D - Poly(1));
    CHECK(s.pow(3) == s - s * D * D);
    CHECK(s.pow(4) == (Poly(1) - D * D).pow(2));
    // collapse at D = 1, s = 0
    Poly expr = D * X() + s * Y();
    CHECK(expr.subst({{delta_sym(), Poly(1)}, {radical_sym(), Poly(0)}}) == X());
}

TEST_CASE("term growth past the limit is refused") {
    Poly p(1);
    auto build = [&] {
        for (int k = 0; k < 20; ++k)
            p *= Poly::monomial(1, Monomial::of(kSymX, 1 << k)) + Poly(1);
    };
    CHECK_THROWS_AS(build(), Error);
}
