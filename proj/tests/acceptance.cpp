// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  argv: [1] optional CLI binary path, [2] optional spec file for the
// determinism run.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "spectral/family.hpp"
#include "spectral/invariants.hpp"

using namespace spectral;
using CurveQ = Curve<Scalar>;
using RF = RatFun<Scalar>;
using PS = Poly<Scalar>;

static RF airy_x() {
    return RF(PS(std::vector<Scalar>{Scalar(0), Scalar(0), Scalar(Rat(1, 2))}));
}
static RF z_plus_inv_z() {
    return RF(PS(std::vector<Scalar>{Scalar(1), Scalar(0), Scalar(1)}),
              PS(std::vector<Scalar>{Scalar(0), Scalar(1)}));
}
static RF cubic_x() {
    return RF(PS(std::vector<Scalar>{Scalar(0), Scalar(-1), Scalar(0), Scalar(Rat(1, 3))}));
}
static RF z_pow_dz(int m) {
    return m >= 0 ? RF(PS::monomial(m, Scalar(1)))
                  : RF(PS(Scalar(1)), PS::monomial(-m, Scalar(1)));
}

static Rat magnitude(const Scalar& s) {
    Rat q = s.to_rational();
    return q < 0 ? Rat(-q) : q;
}

// 1. compatibility window for x = z + 1/z, dy = z^m dz
static bool crit1() {
    for (int m = -1; m <= 3; ++m) {
        TowerCtx ctx;
        CurveQ c = CurveQ::analyze(z_plus_inv_z(), z_pow_dz(m), 24, ctx);
        if (c.compatibility(8).ok != (m == -1 || m == 0)) return false;
    }
    return true;
}

// 2. omega(0,3) recursion route vs direct triple-Bergman residue
static bool crit2() {
    for (auto x : {airy_x(), z_plus_inv_z(), cubic_x()}) {
        TowerCtx ctx;
        CurveQ c = CurveQ::analyze(x, RF(Scalar(1)), 48, ctx);
        Recursion<Scalar> rec(c, 3, 24);
        if (!(rec.omega(0, 3).c == rec.omega03_direct().c)) return false;
    }
    return true;
}

// 3. Airy ancestor oracles, overflow vanishing and sign determinism
static bool crit3() {
    auto run = [] {
        TowerCtx ctx;
        CurveQ c = CurveQ::analyze(airy_x(), RF(Scalar(1)), 72, ctx);
        Recursion<Scalar> rec(c, 4, 24);
        FrobeniusPoint<Scalar> F = frobenius_point(c);
        Invariants<Scalar> inv(rec, F);
        std::vector<InvariantTable<Scalar>> t;
        for (auto [g, n] : {std::pair{1, 1}, {0, 3}, {0, 4}})
            t.push_back(inv.ancestors(g, n, InvBasis::flat));
        return std::pair{rec.omega(1, 1).c, std::move(t)};
    };
    auto [w11, t] = run();
    // omega_{1,1} = dz/(8 z^4), i.e. coefficient 1/8 on dxi^1
    if (w11.size() != 1 || w11.at({BIdx{0, 1}}) != Scalar(Rat(1, 8))) return false;
    if (magnitude(t[0].coeff({{0, 1}})) != Rat(1, 24)) return false;
    if (magnitude(t[1].coeff({{0, 0}, {0, 0}, {0, 0}})) != Rat(1)) return false;
    if (magnitude(t[2].coeff({{0, 1}, {0, 0}, {0, 0}, {0, 0}})) != Rat(1)) return false;
    for (std::size_t i = 0; i < t.size(); ++i) {
        int cap = i == 0 ? 1 : (i == 1 ? 0 : 1);  // 3g - 3 + n
        for (auto& [T, v] : t[i].c) {
            int total = 0;
            for (const BIdx& s : T) total += s.k;
            if (total > cap && !v.is_zero()) return false;
        }
    }
    // signs are a convention, but a deterministic one
    auto [w2, t2] = run();
    for (std::size_t i = 0; i < t.size(); ++i)
        if (!(t[i].c == t2[i].c)) return false;
    return w11 == w2;
}

// 4. Rhat: identity head, Bergman first order, symplectic, factorization
static bool crit4() {
    for (auto x : {z_plus_inv_z(), cubic_x()}) {
        TowerCtx ctx;
        CurveQ c = CurveQ::analyze(x, RF(Scalar(1)), 48, ctx);
        RhatData<Scalar> R = rhat(c, 6);
        int N = c.num_branches();
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                if (R.rhat.m[0][std::size_t(i)][std::size_t(j)] !=
                    Scalar(i == j ? 1 : 0))
                    return false;
                if (i != j && R.rhat.m[1][std::size_t(i)][std::size_t(j)] !=
                                  c.bergman_at_pair(i, j))
                    return false;
            }
        if (!symplectic_check(R.rhat)) return false;
        if (!factorization_check(c, R, 4)) return false;
    }
    return true;
}

// 5. Frobenius identities: metric two ways, canonical metric from dy,
//    three-point vs triple contour pairing, contour count
static bool crit5() {
    for (auto [x, dy] : {std::pair{airy_x(), RF(Scalar(1))},
                         {z_plus_inv_z(), RF(PS(Scalar(1)), PS::monomial(1, Scalar(1)))},
                         {cubic_x(), RF(Scalar(1))}}) {
        TowerCtx ctx;
        CurveQ c = CurveQ::analyze(x, dy, 72, ctx);
        FrobeniusPoint<Scalar> F = frobenius_point(c);
        int N = c.num_branches();
        if (int(F.cont.size()) != N) return false;
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                Scalar s(0);
                for (int i = 0; i < N; ++i)
                    s += F.psi[std::size_t(i)][std::size_t(a)] *
                         F.psi[std::size_t(i)][std::size_t(b)];
                if (s != F.eta_flat[std::size_t(a)][std::size_t(b)]) return false;
            }
        for (int i = 0; i < N; ++i) {
            const Scalar& d = c.branches[std::size_t(i)].dy_value;
            if (F.eta_canonical[std::size_t(i)] != d * d) return false;
        }
        Recursion<Scalar> rec(c, 3, 24);
        Invariants<Scalar> inv(rec, F);
        InvariantTable<Scalar> t03 = inv.ancestors(0, 3, InvBasis::flat);
        for (int a = 0; a < N; ++a)
            for (int b = a; b < N; ++b)
                for (int g = b; g < N; ++g)
                    if (t03.coeff({{a, 0}, {b, 0}, {g, 0}}) != three_point(c, F, a, b, g))
                        return false;
    }
    return true;
}

// 6. pairing lemmas and slot biorthogonality
static bool crit6() {
    for (auto [x, dy] : {std::pair{airy_x(), RF(Scalar(1))},
                         {z_plus_inv_z(), RF(PS(Scalar(1)), PS::monomial(1, Scalar(1)))},
                         {cubic_x(), RF(Scalar(1))}}) {
        TowerCtx ctx;
        CurveQ c = CurveQ::analyze(x, dy, 72, ctx);
        FrobeniusPoint<Scalar> F = frobenius_point(c);
        DiffBasis<Scalar> B = make_basis(c, 3, 12);
        int N = c.num_branches();
        for (int a = 0; a < N; ++a) {
            auto y = chart_primitives(c, F.phi[std::size_t(a)], 12);
            for (int i = 0; i < N; ++i)
                for (int k = 0; k <= 3; ++k) {
                    Scalar v(0);
                    for (int j = 0; j < N; ++j)
                        v += (y[std::size_t(j)] * B.v_expansion(j, BIdx{i, k})).coeff(-1);
                    if (v != (k == 0 ? F.psi[std::size_t(i)][std::size_t(a)] : Scalar(0)))
                        return false;
                }
        }
        Recursion<Scalar> rec(c, 3, 24);
        Invariants<Scalar> inv(rec, F);
        if (!inv.biorthogonal()) return false;
    }
    return true;
}

// 7. two-route ancestor tables for all stable (g,n) with 2g-2+n <= 4
static bool crit7() {
    for (auto [x, dy] : {std::pair{airy_x(), RF(Scalar(1))},
                         {z_plus_inv_z(), RF(PS(Scalar(1)), PS::monomial(1, Scalar(1)))},
                         {cubic_x(), RF(Scalar(1))}}) {
        TowerCtx ctx;
        CurveQ c = CurveQ::analyze(x, dy, 72, ctx);
        FrobeniusPoint<Scalar> F = frobenius_point(c);
        Recursion<Scalar> rec(c, 5, 28);
        Invariants<Scalar> inv(rec, F);
        for (int g = 0; g <= 2; ++g)
            for (int n = 1; n <= 6; ++n) {
                if (3 * g - 3 + n < 0 || 2 * g - 2 + n > 4 || n < 1) continue;
                if (g == 0 && n < 3) continue;
                if (!(inv.ancestors(g, n, InvBasis::flat).c ==
                      inv.ancestors_from_tensor(g, n, InvBasis::flat).c))
                    return false;
            }
    }
    return true;
}

// 8. string and dilaton equations on the correlators
static bool crit8() {
    for (auto x : {airy_x(), z_plus_inv_z(), cubic_x()}) {
        TowerCtx ctx;
        CurveQ c = CurveQ::analyze(x, RF(Scalar(1)), 72, ctx);
        Recursion<Scalar> rec(c, 4, 28);
        for (auto [g, n] : {std::pair{0, 3}, {0, 4}, {1, 1}, {1, 2}})
            if (!rec.string_dilaton_check(g, n)) return false;
    }
    return true;
}

// 9. family identities: cubic pencil, shift invariance, scaling covariance
static bool crit9() {
    using J = JScalar;
    using RFJ = RatFun<J>;
    using PSJ = Poly<J>;
    RFJ dy1(PSJ(J(1)));
    TowerCtx ctx;
    {  // x = z^3/3 - c z at c = 1
        RFJ x(PSJ(std::vector<J>{J(0), J(Scalar(-1), Scalar(-1)), J(0),
                                 J(Scalar(Rat(1, 3)))}));
        auto fam = CurveFamily<Scalar>::analyze(x, dy1, 24, ctx);
        if (!rauch_check(fam, Scalar(3), Scalar(5)).ok) return false;
        if (!vardy_check(fam, Scalar(2)).ok) return false;
        for (int a = 0; a < 2; ++a)
            for (int b = a; b < 2; ++b)
                if (!flatness_check(fam, a, b).ok) return false;
        if (!rmatrix_ode_check(fam, 3).ok) return false;
        auto lg = lg_deformation_check(fam, ctx);
        if (!lg.ok || lg.constant_defect) return false;
    }
    {  // shift x = z^2/2 + c: Rhat constant in c
        RFJ x(PSJ(std::vector<J>{J(Scalar(0), Scalar(1)), J(0), J(Scalar(Rat(1, 2)))}));
        auto fam = CurveFamily<Scalar>::analyze(x, dy1, 24, ctx);
        RhatData<J> R = rhat(fam.jet, 3);
        for (int k = 0; k <= 3; ++k)
            for (auto& row : R.rhat.m[std::size_t(k)])
                for (auto& e : row)
                    if (!e.d.is_zero()) return false;
        if (!rmatrix_ode_check(fam, 3).ok) return false;
    }
    {  // scaling x = l (z^3/3 - z) at l = 1: Rhat_k ~ l^{-k}
        RFJ x(PSJ(std::vector<J>{J(0), J(Scalar(-1), Scalar(-1)), J(0),
                                 J(Scalar(Rat(1, 3)), Scalar(Rat(1, 3)))}));
        auto fam = CurveFamily<Scalar>::analyze(x, dy1, 24, ctx);
        RhatData<J> R = rhat(fam.jet, 3);
        for (int k = 0; k <= 3; ++k)
            for (auto& row : R.rhat.m[std::size_t(k)])
                for (auto& e : row)
                    if (!(e.d == Scalar(-k) * e.v)) return false;
        for (int a = 0; a < 2; ++a)
            for (int b = a; b < 2; ++b)
                if (!flatness_check(fam, a, b).ok) return false;
    }
    return true;
}

// 10. byte-identical JSON across worker counts (exercised through the CLI)
static bool crit10(const std::string& cli, const std::string& spec) {
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    for (const char* sub : {"verify", "invariants --g 1 --n 1"}) {
        std::string base = cli + " " + sub + " " + spec + " --format json";
        if (std::system((base + " --workers 1 > acc_w1.json").c_str()) != 0) return false;
        if (std::system((base + " --workers 5 > acc_w5.json").c_str()) != 0) return false;
        std::string a = slurp("acc_w1.json"), b = slurp("acc_w5.json");
        if (a.empty() || a != b) return false;
    }
    std::remove("acc_w1.json");
    std::remove("acc_w5.json");
    return true;
}

int main(int argc, char** argv) {
    struct Item {
        const char* what;
        std::function<bool()> run;
    };
    std::string cli = argc > 1 ? argv[1] : "";
    std::string spec = argc > 2 ? argv[2] : "";
    std::vector<Item> items = {
        {"compatibility window for dy = z^m dz on x = z + 1/z", crit1},
        {"omega(0,3) two-route equality", crit2},
        {"Airy ancestor oracle values", crit3},
        {"Rhat head, Bergman order, symplectic and factorization", crit4},
        {"Frobenius metric / three-point / contour-count identities", crit5},
        {"pairing lemmas and slot biorthogonality", crit6},
        {"two-route ancestor tables through 2g-2+n = 4", crit7},
        {"string and dilaton equations", crit8},
        {"family variation identities", crit9},
        {"deterministic JSON across worker counts",
         [&] { return !cli.empty() && crit10(cli, spec); }},
    };
    bool all = true;
    for (std::size_t i = 0; i < items.size(); ++i) {
        bool ok = false;
        std::string note;
        try {
            ok = items[i].run();
        } catch (const std::exception& e) {
            note = std::string("  [") + e.what() + "]";
        }
        all = all && ok;
        std::cout << "criterion " << (i + 1) << ": " << (ok ? "PASS" : "FAIL") << "  "
                  << items[i].what << note << "\n"
                  << std::flush;
    }
    return all ? 0 : 1;
}
