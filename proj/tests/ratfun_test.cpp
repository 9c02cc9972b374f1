#include "catch_amalgamated.hpp"

#include <random>

#include "finsler/ratfun/extscalar.hpp"
#include "finsler/ratfun/gcd.hpp"
#include "finsler/ratfun/multipoly.hpp"
#include "finsler/ratfun/ratfun.hpp"

using namespace finsler;
using namespace finsler::ratfun;

namespace {

// chart with n = 2: variables x1, x2, y1, y2
constexpr int NB = 2, NF = 2;

MultiPoly X(int i) { return MultiPoly::variable(NB, NF, i); }
MultiPoly Y(int i) { return MultiPoly::variable(NB, NF, NB + i); }
MultiPoly C(long num, long den = 1) { return MultiPoly::constant(NB, NF, rat(num, den)); }

MultiPoly random_poly(std::mt19937_64& rng, int max_terms = 4, int max_expo = 2) {
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<int> expo(0, max_expo);
    std::uniform_int_distribution<long> coef(-4, 4);
    std::vector<MultiPoly::Term> terms;
    int k = nterms(rng);
    for (int t = 0; t < k; ++t) {
        MonoKey key = 0;
        for (int v = 0; v < NB + NF; ++v) key = mono_set(key, v, expo(rng));
        terms.emplace_back(key, rat(coef(rng)));
    }
    return MultiPoly::from_terms(NB, NF, std::move(terms));
}

// small numerators/denominators: iterated products of unreduced random
// fractions get huge fast, and the properties under test do not need that
RatFun random_ratfun(std::mt19937_64& rng, int max_terms = 2, int max_expo = 1) {
    MultiPoly den = random_poly(rng, max_terms, max_expo);
    while (den.is_zero()) den = random_poly(rng, max_terms, max_expo);
    return RatFun(random_poly(rng, max_terms, max_expo), den);
}

} // namespace

TEST_CASE("poly_diff on the stated examples") {
    // d/dy1 (y1*y2 + 3*x1^2) = y2
    MultiPoly p = Y(0) * Y(1) + C(3) * X(0) * X(0);
    CHECK(p.diff(NB + 0) == Y(1));
    // d/dy1 (5) = 0
    CHECK(C(5).diff(NB + 0).is_zero());
    // d/dx1 (x1^2 y1) = 2 x1 y1
    MultiPoly q = X(0) * X(0) * Y(0);
    CHECK(q.diff(0) == C(2) * X(0) * Y(0));
    // degree in the variable drops by one
    CHECK(q.diff(0).degree_in(0) == q.degree_in(0) - 1);
}

TEST_CASE("poly_diff satisfies the Leibniz rule on random pairs") {
    std::mt19937_64 rng(20240811);
    for (int it = 0; it < 200; ++it) {
        MultiPoly p = random_poly(rng), q = random_poly(rng);
        int var = static_cast<int>(rng() % (NB + NF));
        CHECK((p * q).diff(var) == p.diff(var) * q + p * q.diff(var));
    }
}

TEST_CASE("ring axioms hold exactly on random triples") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 150; ++it) {
        MultiPoly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
    }
}

TEST_CASE("ratfun arithmetic on the stated examples") {
    RatFun y1{MultiPoly(Y(0))}, y2{MultiPoly(Y(1))};
    // (y1/y2) * (y2/y1) = 1
    RatFun r = RatFun(Y(0), Y(1)) * RatFun(Y(1), Y(0));
    CHECK(r == RatFun::constant(NB, NF, rat(1)));
    // 1/y1 + 1/y1 = 2/y1
    RatFun s = RatFun(C(1), Y(0)) + RatFun(C(1), Y(0));
    CHECK(s == RatFun(C(2), Y(0)));
    // (y1+y2)/y1 divided by (y1+y2)/(y1*y2) = y2, checked against the
    // cross-multiplication oracle A*D == result * (B*C)
    MultiPoly A = Y(0) + Y(1), B = Y(0), Cc = Y(0) + Y(1), D = Y(0) * Y(1);
    RatFun q = RatFun(A, B) / RatFun(Cc, D);
    CHECK(q == RatFun(MultiPoly(Y(1))));
    CHECK(A * D == Y(1) * (B * Cc)); // the hand oracle itself
}

TEST_CASE("ratfun division by zero raises") {
    RatFun z = RatFun::zero(NB, NF);
    RatFun f = RatFun(Y(0), Y(1));
    CHECK_THROWS_AS(f / z, DivisionByZero);
    CHECK_THROWS_AS(RatFun(Y(0), MultiPoly(NB, NF)), DivisionByZero);
}

TEST_CASE("canonicalization is idempotent and sign-normalized") {
    std::mt19937_64 rng(99);
    for (int it = 0; it < 100; ++it) {
        RatFun f = random_ratfun(rng);
        RatFun g(f.num(), f.den());
        CHECK(f.num() == g.num());
        CHECK(f.den() == g.den());
        CHECK(sgn(f.den().leading().second) > 0);
    }
    // common polynomial factors under the gate are stripped
    RatFun h((Y(0) + Y(1)) * Y(0), (Y(0) + Y(1)) * Y(1));
    CHECK(h.num() == Y(0));
    CHECK(h.den() == Y(1));
}

TEST_CASE("cross-multiplication equality is consistent with canonical forms") {
    std::mt19937_64 rng(4242);
    for (int it = 0; it < 100; ++it) {
        RatFun f = random_ratfun(rng);
        MultiPoly m = random_poly(rng);
        if (m.is_zero()) continue;
        // scaling num and den by the same polynomial keeps the function
        RatFun g(f.num() * m, f.den() * m);
        CHECK(f == g);
    }
}

TEST_CASE("multivariate gcd strips shared factors") {
    MultiPoly a = (Y(0) + Y(1)).pow(2) * (X(0) + C(1));
    MultiPoly b = (Y(0) + Y(1)) * (Y(0) - Y(1));
    MultiPoly g = poly_gcd(a, b);
    CHECK(g == Y(0) + Y(1));
    CHECK(poly_gcd(Y(0), Y(1)).is_constant());
}

TEST_CASE("polynomial square root detection") {
    MultiPoly sq = (Y(0) + Y(1)).pow(2);
    auto root = sq.sqrt_exact();
    REQUIRE(root.has_value());
    CHECK(*root * *root == sq);
    CHECK(!(Y(0) * Y(0) + Y(1) * Y(1)).sqrt_exact().has_value());
    auto scaled = (C(4) * Y(0) * Y(0)).sqrt_exact();
    REQUIRE(scaled.has_value());
    CHECK(*scaled == C(2) * Y(0));
}

TEST_CASE("perfect-square radicand is rejected at context construction") {
    CHECK_THROWS_AS(make_ext_context((Y(0) + Y(1)).pow(2)), PerfectSquareRadicand);
    CHECK_THROWS_AS(make_ext_context(C(4) * Y(0) * Y(0)), PerfectSquareRadicand);
    CHECK_THROWS_AS(make_ext_context(MultiPoly(NB, NF)), DomainViolation);
    CHECK_NOTHROW(make_ext_context(Y(0) * Y(0) + Y(1) * Y(1)));
}

TEST_CASE("ext_diff follows the chain rule on w") {
    auto ctx = make_ext_context(Y(0) * Y(0) + Y(1) * Y(1));
    ExtScalar w = ExtScalar::w(ctx);
    // d/dy1 w = y1/(y1^2+y2^2) * w, from dw/dv = (d radicand/dv) w / (2 radicand)
    ExtScalar dw = w.diff(NB + 0);
    ExtScalar expected(ctx, RatFun::zero(NB, NF), RatFun(Y(0), Y(0) * Y(0) + Y(1) * Y(1)));
    CHECK(dw == expected);

    // rational-only element: reduces to the plain quotient-rule derivative
    ExtScalar a = ExtScalar::from_rat(ctx, RatFun(Y(0) * Y(0), Y(1)));
    ExtScalar da = a.diff(NB + 0);
    CHECK(da.is_rational() == Certificate::Rational);
    CHECK(da.rat_part() == RatFun(Y(0) * Y(0), Y(1)).diff(NB + 0));

    // w^2 differentiates the same way as the radicand itself
    ExtScalar w2 = w * w;
    CHECK(w2.is_rational() == Certificate::Rational);
    CHECK(w2.diff(NB + 0) == ExtScalar::from_rat(ctx, RatFun((Y(0) * Y(0) + Y(1) * Y(1)).diff(NB + 0))));
    // product rule on w*w agrees
    ExtScalar two(ExtScalar::constant(ctx, rat(2)));
    CHECK(w2.diff(NB + 0) == two * w * w.diff(NB + 0));
}

TEST_CASE("ext_diff consistency: (e^2)' = 2 e e' on random scalars") {
    auto ctx = make_ext_context(Y(0) * Y(0) + Y(1) * Y(1) + C(1));
    std::mt19937_64 rng(31337);
    ExtScalar two = ExtScalar::constant(ctx, rat(2));
    for (int it = 0; it < 40; ++it) {
        ExtScalar e(ctx, random_ratfun(rng), random_ratfun(rng));
        int var = static_cast<int>(rng() % (NB + NF));
        CHECK((e * e).diff(var) == two * e * e.diff(var));
    }
}

TEST_CASE("is_rational decides the generalized m-Kropina Finsler function") {
    // alpha^2 = y1^2 + y2^2, beta = y1, c = r = 1; radicand = alpha^2 + beta^2
    MultiPoly alpha2 = Y(0) * Y(0) + Y(1) * Y(1);
    MultiPoly beta = Y(0);
    MultiPoly md = alpha2 + beta * beta;
    auto ctx = make_ext_context(md);

    // m = 3 (odd): F = beta^-3 (alpha^2+beta^2)^2 is rational
    ExtScalar f3 = ExtScalar::from_rat(ctx, RatFun(md.pow(2), beta.pow(3)));
    CHECK(is_rational(f3) == Certificate::Rational);

    // m = 2 (even): F = beta^-2 (alpha^2+beta^2) w is irrational
    ExtScalar f2(ctx, RatFun::zero(NB, NF), RatFun(md, beta.pow(2)));
    CHECK(is_rational(f2) == Certificate::Irrational);

    // but F^2 is rational again for every integer m
    CHECK(is_rational(f2 * f2) == Certificate::Rational);
}

TEST_CASE("is_rational is invariant under multiplication by nonzero RatFun") {
    auto ctx = make_ext_context(Y(0) * Y(0) + Y(1) * Y(1) + C(2));
    std::mt19937_64 rng(555);
    for (int it = 0; it < 60; ++it) {
        ExtScalar e(ctx, random_ratfun(rng), random_ratfun(rng));
        RatFun m = random_ratfun(rng);
        if (m.is_zero()) continue;
        ExtScalar me = ExtScalar::from_rat(ctx, m) * e;
        CHECK(is_rational(me) == is_rational(e));
    }
}

TEST_CASE("mixed radicands cannot be combined") {
    auto c1 = make_ext_context(Y(0) * Y(0) + Y(1) * Y(1));
    auto c2 = make_ext_context(Y(0) * Y(0) + C(2) * Y(1) * Y(1));
    CHECK_THROWS_AS(ExtScalar::w(c1) + ExtScalar::w(c2), MixedRadicand);
}

TEST_CASE("extension field algebra closes and inverts") {
    auto ctx = make_ext_context(Y(0) * Y(0) + Y(1) * Y(1));
    ExtScalar w = ExtScalar::w(ctx);
    ExtScalar e = ExtScalar::constant(ctx, rat(3)) + w;
    ExtScalar inv = ExtScalar::constant(ctx, rat(1)) / e;
    CHECK(e * inv == ExtScalar::constant(ctx, rat(1)));
    CHECK_THROWS_AS(e / (e - e), DivisionByZero);
}
