#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "spectral/scalar.hpp"

using namespace spectral;

TEST_CASE("rational arithmetic is exact") {
    Scalar a(Rat(1, 3)), b(Rat(5, 7));
    REQUIRE((a + b) - b == a);
    REQUIRE(a * b == Scalar(Rat(5, 21)));
    REQUIRE(a / b == Scalar(Rat(7, 15)));
}

TEST_CASE("adjoin sqrt(2)") {
    TowerCtx ctx;
    Scalar r = ctx.adjoin_sqrt(Scalar(2));
    REQUIRE(ctx.depth() == 1);
    REQUIRE(r * r == Scalar(2));
    REQUIRE(!r.is_rational());
}

TEST_CASE("adjoin sqrt(4) returns 2 without a new level") {
    TowerCtx ctx;
    Scalar r = ctx.adjoin_sqrt(Scalar(4));
    REQUIRE(ctx.depth() == 0);
    REQUIRE(r == Scalar(2));
}

TEST_CASE("adjoin sqrt(0) is rejected") {
    TowerCtx ctx;
    REQUIRE_THROWS_AS(ctx.adjoin_sqrt(Scalar(0)), degeneracy_error);
    REQUIRE(ctx.sqrt(Scalar(0)) == Scalar(0));
}

TEST_CASE("sqrt(-2) over Q(sqrt 2): normal-form multiplication") {
    TowerCtx ctx;
    Scalar r2 = ctx.adjoin_sqrt(Scalar(2));
    Scalar rm2 = ctx.adjoin_sqrt(Scalar(-2));
    REQUIRE(ctx.depth() == 2);
    REQUIRE(rm2 * rm2 == Scalar(-2));
    Scalar prod = rm2 * r2;
    REQUIRE(prod * prod == Scalar(-4));
}

TEST_CASE("in-tower square detection across levels") {
    TowerCtx ctx;
    Scalar r2 = ctx.adjoin_sqrt(Scalar(2));
    // 3 + 2*sqrt(2) = (1 + sqrt(2))^2
    Scalar s = Scalar(3) + Scalar(2) * r2;
    Scalar rt = ctx.sqrt(s);
    REQUIRE(ctx.depth() == 1);
    REQUIRE(rt * rt == s);
    REQUIRE(rt == Scalar(1) + r2);
    // sqrt(8) = 2 sqrt(2), found in-tower with canonical positive sign
    REQUIRE(ctx.sqrt(Scalar(8)) == Scalar(2) * r2);
    // sqrt(2)*r over Q(sqrt 2): 2*sqrt(2) is not a square there
    Scalar t = Scalar(2) * r2;
    Scalar rt2 = ctx.sqrt(t);
    REQUIRE(ctx.depth() == 2);
    REQUIRE(rt2 * rt2 == t);
}

TEST_CASE("field axioms on random tower elements") {
    TowerCtx ctx;
    Scalar r2 = ctx.adjoin_sqrt(Scalar(2));
    Scalar rm3 = ctx.adjoin_sqrt(Scalar(-3));
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> coef(-9, 9);
    auto rnd = [&] {
        Scalar s(0);
        s += Scalar(coef(rng)) + Scalar(coef(rng)) * r2 + Scalar(coef(rng)) * rm3 +
             Scalar(coef(rng)) * r2 * rm3;
        return s;
    };
    for (int it = 0; it < 40; ++it) {
        Scalar a = rnd(), b = rnd(), c = rnd();
        REQUIRE((a + b) - b == a);
        REQUIRE(a * (b + c) == a * b + a * c);
        REQUIRE(a * b == b * a);
        REQUIRE((a * b) * c == a * (b * c));
        if (!a.is_zero()) REQUIRE(a * a.inv() == Scalar(1));
    }
}

TEST_CASE("numeric approximation is consistent") {
    TowerCtx ctx;
    Scalar r2 = ctx.adjoin_sqrt(Scalar(2));
    Scalar s = Scalar(1) + r2;
    REQUIRE(std::abs(s.approx().real() - (1.0 + std::sqrt(2.0))) < 1e-12);
    Scalar rm2 = ctx.adjoin_sqrt(Scalar(-2));
    REQUIRE(std::abs(rm2.approx().imag() - std::sqrt(2.0)) < 1e-12);
}
