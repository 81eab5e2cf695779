#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "spectral/io.hpp"

using namespace spectral;

static SpecFile from_text(const std::string& s) {
    std::istringstream in(s);
    return SpecFile::parse(in);
}

TEST_CASE("curve spec parsing") {
    CurveSpec s = CurveSpec::from(from_text("# two-branch curve\n"
                                            "x_num = 1 0 1\n"
                                            "x_den = 0 1\n"
                                            "dy_den = 0 1\n"
                                            "order = 60\n"));
    REQUIRE_FALSE(s.is_family);
    REQUIRE(s.order == 60);
    RatFun<Scalar> x = s.base_x();
    REQUIRE(x.num().coeffs() == std::vector<Scalar>{Scalar(1), Scalar(0), Scalar(1)});
    REQUIRE(x.den().coeffs() == std::vector<Scalar>{Scalar(0), Scalar(1)});
    REQUIRE(s.base_dy().den().coeffs() == std::vector<Scalar>{Scalar(0), Scalar(1)});
    // omitted dy defaults to dz
    CurveSpec airy = CurveSpec::from(from_text("x_num = 0 0 1/2\n"));
    REQUIRE(airy.base_dy().num().coeffs() == std::vector<Scalar>{Scalar(1)});
    REQUIRE(airy.order == 48);
}

TEST_CASE("family spec parsing evaluates parameter polynomials as jets") {
    CurveSpec s = CurveSpec::from(from_text("x_num = 0 0,-1 0 1/3\n"
                                            "c0 = 2\n"));
    REQUIRE(s.is_family);
    REQUIRE(s.c0 == Rat(2));
    // coefficient of z: -c evaluated at c0 = 2 with unit derivative
    JScalar c1 = s.x.num().coeffs()[1];
    REQUIRE(c1.v == Scalar(-2));
    REQUIRE(c1.d == Scalar(-1));
    // quadratic dependence: c^2 = 0,0,1 has value 4, derivative 4 at c0 = 2
    CurveSpec q = CurveSpec::from(from_text("x_num = 0 0,0,1\nc0 = 2\n"));
    REQUIRE(q.x.num().coeffs()[1].v == Scalar(4));
    REQUIRE(q.x.num().coeffs()[1].d == Scalar(4));
    REQUIRE(jet_value(q.x).num().coeffs()[1] == Scalar(4));
}

TEST_CASE("spec errors carry line and key context") {
    REQUIRE_THROWS_AS(from_text("x_num\n"), parse_error);
    REQUIRE_THROWS_AS(from_text("x_num =\n"), parse_error);
    REQUIRE_THROWS_AS(from_text("a = 1\na = 2\n"), parse_error);
    REQUIRE_THROWS_AS(CurveSpec::from(from_text("x_den = 1\n")), parse_error);
    REQUIRE_THROWS_AS(CurveSpec::from(from_text("x_num = abc\n")), parse_error);
    REQUIRE_THROWS_AS(CurveSpec::from(from_text("x_num = 1/0\n")), parse_error);
    REQUIRE_THROWS_AS(CurveSpec::from(from_text("x_num = 1\nx_den = 0 0\n")), parse_error);
    REQUIRE_THROWS_AS(CurveSpec::from(from_text("x_num = 1\norder = 2\n")), parse_error);
    REQUIRE_THROWS_AS(CurveSpec::from(from_text("x_num = 1\norder = 1000\n")), parse_error);
    REQUIRE_THROWS_AS(CurveSpec::from(from_text("x_num = 1\norder = 1/2\n")), parse_error);
    REQUIRE_THROWS_AS(SpecFile::load("/nonexistent/file"), parse_error);
}

TEST_CASE("round trip: serialized exact values re-parse to equal scalars") {
    TowerCtx ctx;
    Scalar r2 = ctx.sqrt(Scalar(2));
    Scalar r3 = ctx.sqrt(Scalar(3));
    Scalar nested = ctx.sqrt(r2 + Scalar(1));  // sqrt(1 + sqrt 2), depth 2 radicand
    Scalar vals[] = {Scalar(Rat(-7, 3)), r2, Scalar(Rat(1, 2)) * r3 - Scalar(5) * r2,
                     nested + r3, Scalar(0)};

    json tw = tower_json(ctx);
    TowerPtr rebuilt = tower_from_json(tw);
    REQUIRE(tower_json(ctx) == tw);  // serialization is stable

    for (const Scalar& s : vals) {
        json j = scalar_json(ctx, s);
        Scalar back = scalar_from_json(j, rebuilt);
        if (s.is_rational()) {
            REQUIRE(back.is_rational());
            REQUIRE(back.to_rational() == s.to_rational());
        } else {
            REQUIRE(back.coeffs() == ctx.lift(s).coeffs());
        }
        // a second pass through JSON is byte-identical
        TowerCtx ctx2;  // lifting 'back' only needs its own tower
        REQUIRE(scalar_json(ctx, s).dump() == j.dump());
        (void)ctx2;
    }
}

TEST_CASE("malformed serialized scalars are rejected") {
    TowerCtx ctx;
    ctx.sqrt(Scalar(2));
    TowerPtr t = tower_from_json(tower_json(ctx));
    REQUIRE_THROWS_AS(scalar_from_json(json::parse("\"x\""), t), parse_error);
    REQUIRE_THROWS_AS(scalar_from_json(json::parse("[\"1\",\"2\",\"3\"]"), t), parse_error);
    REQUIRE_THROWS_AS(tower_from_json(json::parse("[[\"2\",\"3\"]]")), parse_error);
}
