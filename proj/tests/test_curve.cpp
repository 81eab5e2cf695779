#include <catch2/catch_amalgamated.hpp>

#include "spectral/curve.hpp"

using namespace spectral;
using CurveQ = Curve<Scalar>;
using RF = RatFun<Scalar>;
using PS = Poly<Scalar>;
using S = Ser<Scalar>;

static RF airy_x() {
    return RF(PS(std::vector<Scalar>{Scalar(0), Scalar(0), Scalar(Rat(1, 2))}));
}
static RF zdz(int m) { return RF::z().pow_int(m); }
static RF z_plus_inv_z() {
    return RF(PS(std::vector<Scalar>{Scalar(1), Scalar(0), Scalar(1)}),
              PS(std::vector<Scalar>{Scalar(0), Scalar(1)}));
}
static RF cubic_x() {
    // z^3/3 - z
    return RF(PS(std::vector<Scalar>{Scalar(0), Scalar(-1), Scalar(0), Scalar(Rat(1, 3))}));
}

// x pulled through the branch chart must be exactly u + zeta^2/2.
static void check_airy_chart(const CurveQ& c, int i, int hi) {
    const auto& b = c.branches[std::size_t(i)];
    S xs = c.ratfun_series_at(c.x, b.loc, hi);
    S comp = compose(xs, b.t_of_zeta);
    S expect = S::constant(b.u, comp.hi()) +
               S::monomial(2, Scalar(Rat(1, 2)), comp.hi());
    REQUIRE((comp - expect).known_zero());
}

TEST_CASE("analyze: Airy curve") {
    TowerCtx ctx;
    CurveQ c = CurveQ::analyze(airy_x(), RF(Scalar(1)), 8, ctx);
    REQUIRE(c.num_branches() == 1);
    REQUIRE_FALSE(c.branches[0].loc.inf);
    REQUIRE(c.branches[0].loc.a == Scalar(0));
    REQUIRE(c.branches[0].u == Scalar(0));
    REQUIRE(c.branches[0].branch_root == Scalar(1));
    REQUIRE(c.branches[0].zeta_of_t.coeff(1) == Scalar(1));
    REQUIRE(c.branches[0].t_of_zeta.coeff(1) == Scalar(1));
    REQUIRE(c.branches[0].dy_value == Scalar(1));
    REQUIRE(c.num_poles() == 1);
    REQUIRE(c.poles[0].loc.inf);
    REQUIRE(c.poles[0].mu == 2);
    REQUIRE(c.poles[0].lead == Scalar(Rat(1, 2)));
    REQUIRE(ctx.depth() == 0);
    check_airy_chart(c, 0, 8);
}

TEST_CASE("analyze: x = z + 1/z") {
    TowerCtx ctx;
    CurveQ c = CurveQ::analyze(z_plus_inv_z(), RF(Scalar(1)), 8, ctx);
    REQUIRE(c.num_branches() == 2);
    REQUIRE(c.branches[0].loc.a == Scalar(1));
    REQUIRE(c.branches[1].loc.a == Scalar(-1));
    REQUIRE(c.branches[0].u == Scalar(2));
    REQUIRE(c.branches[1].u == Scalar(-2));
    // eta_i = dy(P_i)^2 = (1/2, -1/2) for dy = dz
    Scalar e0 = c.branches[0].dy_value * c.branches[0].dy_value;
    Scalar e1 = c.branches[1].dy_value * c.branches[1].dy_value;
    REQUIRE(e0 == Scalar(Rat(1, 2)));
    REQUIRE(e1 == Scalar(Rat(-1, 2)));
    // poles: infinity first, then z = 0
    REQUIRE(c.num_poles() == 2);
    REQUIRE(c.poles[0].loc.inf);
    REQUIRE(c.poles[0].mu == 1);
    REQUIRE_FALSE(c.poles[1].loc.inf);
    REQUIRE(c.poles[1].loc.a == Scalar(0));
    REQUIRE(c.poles[1].mu == 1);
    check_airy_chart(c, 0, 8);
    check_airy_chart(c, 1, 8);
}

TEST_CASE("analyze: x = z^3/3 - z") {
    TowerCtx ctx;
    CurveQ c = CurveQ::analyze(cubic_x(), RF(Scalar(1)), 8, ctx);
    REQUIRE(c.num_branches() == 2);
    REQUIRE(c.branches[0].loc.a == Scalar(1));
    REQUIRE(c.branches[0].u == Scalar(Rat(-2, 3)));
    REQUIRE(c.branches[1].u == Scalar(Rat(2, 3)));
    REQUIRE(c.num_poles() == 1);
    REQUIRE(c.poles[0].mu == 3);
    check_airy_chart(c, 0, 8);
    check_airy_chart(c, 1, 8);
}

TEST_CASE("analyze: branch point at infinity") {
    TowerCtx ctx;
    // x = 1/z^2: Airy curve in the coordinate 1/z
    RF x(PS(Scalar(1)), PS(std::vector<Scalar>{Scalar(0), Scalar(0), Scalar(1)}));
    RF dy(PS(Scalar(-1)), PS(std::vector<Scalar>{Scalar(0), Scalar(0), Scalar(1)}));
    CurveQ c = CurveQ::analyze(x, dy, 8, ctx);
    REQUIRE(c.num_branches() == 1);
    REQUIRE(c.branches[0].loc.inf);
    REQUIRE(c.branches[0].u == Scalar(0));
    REQUIRE(c.num_poles() == 1);
    REQUIRE_FALSE(c.poles[0].loc.inf);
    REQUIRE(c.poles[0].mu == 2);
    check_airy_chart(c, 0, 8);
    // dy = -dz/z^2 = dt is the Airy differential in the chart
    Scalar v2 = c.branches[0].dy_value * c.branches[0].dy_value;
    REQUIRE(v2 == Scalar(Rat(1, 2)));
}

TEST_CASE("analyze: degeneracies") {
    TowerCtx ctx;
    RF z3(PS(std::vector<Scalar>{Scalar(0), Scalar(0), Scalar(0), Scalar(Rat(1, 3))}));
    REQUIRE_THROWS_AS(CurveQ::analyze(z3, RF(Scalar(1)), 6, ctx), degeneracy_error);
    REQUIRE_THROWS_AS(CurveQ::analyze(RF(Scalar(5)), RF(Scalar(1)), 6, ctx),
                      degeneracy_error);
    // dy vanishing at a branch point is inadmissible
    REQUIRE_THROWS_AS(CurveQ::analyze(airy_x(), RF::z(), 6, ctx), admissibility_error);
}

TEST_CASE("Bergman kernel: Airy charts are exact") {
    TowerCtx ctx;
    CurveQ c = CurveQ::analyze(airy_x(), RF(Scalar(1)), 24, ctx);
    REQUIRE(c.bergman_pair(0, 0, 4, 4).known_zero());

    // x = 1/z^2 exercises the Mobius route; the chart is still linear
    RF x(PS(Scalar(1)), PS(std::vector<Scalar>{Scalar(0), Scalar(0), Scalar(1)}));
    RF dy(PS(Scalar(-1)), PS(std::vector<Scalar>{Scalar(0), Scalar(0), Scalar(1)}));
    CurveQ ci = CurveQ::analyze(x, dy, 24, ctx);
    REQUIRE(ci.bergman_pair(0, 0, 3, 3).known_zero());
}

// regular part of B on the diagonal at (0,0) equals {z, zeta}/6 at zeta = 0
static Scalar schwarzian_over_six(const CurveQ& c, int i) {
    const S& t = c.branches[std::size_t(i)].t_of_zeta;
    Scalar a1 = t.coeff(1), a2 = t.coeff(2), a3 = t.coeff(3);
    return a3 / a1 - (a2 * a2) / (a1 * a1);
}

TEST_CASE("Bergman kernel: diagonal against the Schwarzian") {
    TowerCtx ctx;
    CurveQ c = CurveQ::analyze(z_plus_inv_z(), RF(Scalar(1)), 24, ctx);
    for (int i = 0; i < 2; ++i) {
        BiSer<Scalar> b = c.bergman_pair(i, i, 3, 3);
        REQUIRE(b.coeff(0, 0) == schwarzian_over_six(c, i));
        for (int e1 = 0; e1 < 3; ++e1)
            for (int e2 = 0; e2 < 3; ++e2) {
                REQUIRE(b.coeff_window(e1, e2) == b.coeff_window(e2, e1));
                if ((e1 + e2) % 2 != 0) REQUIRE(b.coeff_window(e1, e2).is_zero());
            }
    }
    TowerCtx ctx2;
    CurveQ c2 = CurveQ::analyze(cubic_x(), RF(Scalar(1)), 24, ctx2);
    for (int i = 0; i < 2; ++i) {
        BiSer<Scalar> b = c2.bergman_pair(i, i, 3, 3);
        REQUIRE(b.coeff(0, 0) == schwarzian_over_six(c2, i));
    }
}

TEST_CASE("Bergman kernel: off-diagonal symmetry and value") {
    TowerCtx ctx;
    CurveQ c = CurveQ::analyze(z_plus_inv_z(), RF(Scalar(1)), 12, ctx);
    BiSer<Scalar> b01 = c.bergman_pair(0, 1, 3, 3);
    BiSer<Scalar> b10 = c.bergman_pair(1, 0, 3, 3);
    for (int e1 = 0; e1 < 3; ++e1)
        for (int e2 = 0; e2 < 3; ++e2)
            REQUIRE(b01.coeff_window(e1, e2) == b10.coeff_window(e2, e1));
    // B(P_1, P_2)^2 = (dz/dzeta_1 dz/dzeta_2 / (z_1 - z_2)^2)^2 = -1/64
    Scalar v = c.bergman_at_pair(0, 1);
    REQUIRE(v * v == Scalar(Rat(-1, 64)));
    REQUIRE(c.bergman_at_pair(1, 0) == v);
}

TEST_CASE("dominance") {
    TowerCtx ctx;
    {
        CurveQ c = CurveQ::analyze(airy_x(), RF(Scalar(1)), 6, ctx);
        REQUIRE(c.dominance());
    }
    {
        CurveQ c = CurveQ::analyze(z_plus_inv_z(), zdz(2), 6, ctx);
        REQUIRE_FALSE(c.dominance());
    }
    {
        CurveQ c = CurveQ::analyze(z_plus_inv_z(), zdz(-1), 6, ctx);
        REQUIRE(c.dominance());
    }
}

TEST_CASE("compatibility: x = z + 1/z with dy = z^m dz") {
    TowerCtx ctx;
    for (int m = -1; m <= 3; ++m) {
        CurveQ c = CurveQ::analyze(z_plus_inv_z(), zdz(m), 12, ctx);
        bool expect = (m == -1 || m == 0);
        auto rep = c.compatibility(4);
        INFO("m = " << m);
        REQUIRE(rep.ok == expect);
    }
}

TEST_CASE("compatibility: dominant curves pass") {
    TowerCtx ctx;
    CurveQ a = CurveQ::analyze(airy_x(), RF(Scalar(1)), 12, ctx);
    REQUIRE(a.compatibility(4).ok);
    CurveQ b = CurveQ::analyze(cubic_x(), RF(Scalar(1)), 12, ctx);
    REQUIRE(b.compatibility(4).ok);
}

TEST_CASE("evaluation functional matches recorded dy value") {
    TowerCtx ctx;
    CurveQ c = CurveQ::analyze(z_plus_inv_z(), zdz(-1), 8, ctx);
    for (int i = 0; i < 2; ++i) {
        S d = c.expand_diff_at_branch(c.dy, i, 3);
        REQUIRE(CurveQ::evaluate(d) == c.branches[std::size_t(i)].dy_value);
    }
}
