#ifndef SPECTRAL_FAMILY_HPP
#define SPECTRAL_FAMILY_HPP

#include "frobenius.hpp"

namespace spectral {

// value fiber of a rational function with jet coefficients
template <class K>
RatFun<K> jet_value(const RatFun<Jet<K>>& r) {
    std::vector<K> n, d;
    for (const Jet<K>& c : r.num().coeffs()) n.push_back(c.v);
    for (const Jet<K>& c : r.den().coeffs()) d.push_back(c.v);
    return RatFun<K>(Poly<K>(std::move(n)), Poly<K>(std::move(d)));
}

// d/dc at fixed z: (n' d - n d') / d^2 from the jet parts of the coefficients
template <class K>
RatFun<K> jet_derivative(const RatFun<Jet<K>>& r) {
    std::vector<K> nv, nd, dv, dd;
    for (const Jet<K>& c : r.num().coeffs()) {
        nv.push_back(c.v);
        nd.push_back(c.d);
    }
    for (const Jet<K>& c : r.den().coeffs()) {
        dv.push_back(c.v);
        dd.push_back(c.d);
    }
    RatFun<K> n(Poly<K>(std::move(nv)), Poly<K>(K(1)));
    RatFun<K> nc(Poly<K>(std::move(nd)), Poly<K>(K(1)));
    RatFun<K> den(Poly<K>(std::move(dv)), Poly<K>(K(1)));
    RatFun<K> dc(Poly<K>(std::move(dd)), Poly<K>(K(1)));
    return (nc * den - n * dc) / (den * den);
}

// Rational antiderivative of r(z)dz via partial fractions; requires every
// residue to vanish (no log terms).
template <class K>
RatFun<K> rational_primitive(const RatFun<K>& r, TowerCtx& ctx) {
    if (r.num().is_zero()) return RatFun<K>();
    RatFun<K> out, rebuilt;
    auto expand_at = [](const Poly<K>& p, const K& a, int hi) {
        Poly<K> sh = p.shifted(a);
        std::vector<K> v(std::size_t(hi), K(0));
        for (int e = 0; e <= sh.deg() && e < hi; ++e) v[std::size_t(e)] = sh.coeff(e);
        return Ser<K>(0, hi, std::move(v));
    };
    for (auto& [a, mult] : RootFinder<K>::roots(r.den(), ctx)) {
        int H = mult + 2;
        Ser<K> ns = expand_at(r.num(), a, H + mult);
        Ser<K> ds = expand_at(r.den(), a, H + mult);
        Ser<K> s = (ns * ds.inv()).truncated(1);
        Poly<K> sh(std::vector<K>{-a, K(1)});
        if (!s.coeff(-1).is_zero())
            throw admissibility_error("differential has a residue: primitive not rational");
        RatFun<K> pw(Poly<K>(K(1)), sh);
        RatFun<K> ppw = pw;
        for (int j = 1; j <= -s.lo(); ++j) {
            K cj = s.coeff(-j);
            rebuilt += cj * ppw;
            if (j >= 2) out += (-cj / K(long(j - 1))) * (pw.pow_int(j - 1));
            ppw = ppw * pw;
        }
    }
    // polynomial part
    Poly<K> q = divmod(r.num(), r.den()).first;
    for (int e = 0; e <= q.deg(); ++e) {
        rebuilt += RatFun<K>(Poly<K>::monomial(e, q.coeff(e)));
        out += RatFun<K>(Poly<K>::monomial(e + 1, q.coeff(e) / K(long(e + 1))));
    }
    if (!(r - rebuilt).num().is_zero())
        throw internal_consistency_error("partial fraction reassembly failed");
    return out;
}

// One-parameter family of curves at first order: the fiber analyzed over dual
// numbers c0 + eps alongside the plain base fiber, sharing one tower.
template <class K>
struct CurveFamily {
    Curve<Jet<K>> jet;
    Curve<K> base;

    static CurveFamily analyze(const RatFun<Jet<K>>& x, const RatFun<Jet<K>>& dy, int order,
                               TowerCtx& ctx) {
        CurveFamily F;
        F.base = Curve<K>::analyze(jet_value(x), jet_value(dy), order, ctx);
        F.jet = Curve<Jet<K>>::analyze(x, dy, order, ctx);
        if (F.jet.num_branches() != F.base.num_branches())
            throw internal_consistency_error("family fiber disagrees with base");
        return F;
    }

    // point identified at fixed x-value: z(c) with x(z(c); c) = x(z0; c0)
    Jet<K> matched_point(const K& z0) const {
        K xp = jet_value(jet.x).derivative().eval(z0);
        if (xp.is_zero()) throw degeneracy_error("fixed-x matching at a critical point");
        K xc = jet_derivative(jet.x).eval(z0);
        return Jet<K>(z0, -xc / xp);
    }
};

// du_i/dc through the critical-point equation, solved inside the jet analysis.
template <class K>
std::vector<K> du_dc(const CurveFamily<K>& fam) {
    std::vector<K> out;
    for (const auto& b : fam.jet.branches) out.push_back(b.u.d);
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (fam.jet.branches[i].u == fam.jet.branches[j].u)
                throw degeneracy_error("branch collision at first order");
    return out;
}

template <class K>
struct FamilyReport {
    bool ok = false;
    K lhs{};
    K rhs{};
};

// d/dc B(p1,p2)|_{x-fixed} = sum_i du_i/dc . Res_{P_i} B(p,p1)B(p,p2)/dx(p),
// both sides written on the coefficient of dx(p1) dx(p2).
template <class K>
FamilyReport<K> rauch_check(const CurveFamily<K>& fam, const K& z1, const K& z2) {
    if (z1 == z2) throw degeneracy_error("Rauch check needs distinct points");
    Jet<K> Z1 = fam.matched_point(z1);
    Jet<K> Z2 = fam.matched_point(z2);
    RatFun<Jet<K>> xp = fam.jet.x.derivative();
    Jet<K> diff = Z1 - Z2;
    Jet<K> b = (diff * diff * xp.eval(Z1) * xp.eval(Z2)).inv();
    FamilyReport<K> rep;
    rep.lhs = b.d;
    // base-side residue sum of 1/((p-z1)^2 (p-z2)^2 x'(p)) dp
    RatFun<K> xpb = fam.base.x.derivative();
    auto sq = [](const K& a) {
        Poly<K> l(std::vector<K>{-a, K(1)});
        return RatFun<K>(Poly<K>(K(1)), l * l);
    };
    RatFun<K> r = sq(z1) * sq(z2) / xpb;
    std::vector<K> du = du_dc(fam);
    K s(0);
    for (int i = 0; i < fam.base.num_branches(); ++i)
        s += du[std::size_t(i)] * fam.base.expand_diff_at_branch(r, i, 2).coeff(-1);
    rep.rhs = s / (xpb.eval(z1) * xpb.eval(z2));
    rep.ok = rep.lhs == rep.rhs;
    return rep;
}

// d/dc dy(p)|_{x-fixed} = sum_i du_i/dc . dy(P_i) B(p, P_i), on the
// coefficient of dx(p).
template <class K>
FamilyReport<K> vardy_check(const CurveFamily<K>& fam, const K& z0) {
    Jet<K> Z = fam.matched_point(z0);
    Jet<K> g = (fam.jet.dy / fam.jet.x.derivative()).eval(Z);
    FamilyReport<K> rep;
    rep.lhs = g.d;
    RatFun<K> xpb = fam.base.x.derivative();
    std::vector<K> du = du_dc(fam);
    K s(0);
    for (int i = 0; i < fam.base.num_branches(); ++i) {
        const auto& b = fam.base.branches[std::size_t(i)];
        // B(p, P_i) = t'(0) dp/(p - a_i)^2 under the evaluation functional
        K ker = b_second_slot_kernel<K>(b.loc, 0).eval(z0) * b.t_of_zeta.coeff(1);
        s += du[std::size_t(i)] * b.dy_value * ker;
    }
    rep.rhs = s / xpb.eval(z0);
    rep.ok = rep.lhs == rep.rhs;
    return rep;
}

// d/dc <phi_C, phi_C'> = 0 for contours held fixed along the family.  The
// type-1 weight is normalized by the leading coefficient of x at the pole, so
// when that coefficient varies with c the entry is constant only up to the
// exact covariance factor -(k/mu) d(log lead)/dc per type-1 contour; the check
// verifies the corrected identity.
template <class K>
FamilyReport<K> flatness_check(const CurveFamily<K>& fam, int a, int b) {
    std::vector<Contour> ct = contours(fam.jet);
    RatFun<Jet<K>> pa = primary_differential(fam.jet, ct[std::size_t(a)]);
    RatFun<Jet<K>> pb = primary_differential(fam.jet, ct[std::size_t(b)]);
    Jet<K> s(K(0));
    for (int i = 0; i < fam.jet.num_branches(); ++i)
        s += Curve<Jet<K>>::evaluate(fam.jet.expand_diff_at_branch(pa, i, 2)) *
             Curve<Jet<K>>::evaluate(fam.jet.expand_diff_at_branch(pb, i, 2));
    auto norm_rate = [&](const Contour& C) {
        if (C.type != 1) return K(0);
        const auto& P = fam.jet.poles[std::size_t(C.pole)];
        return (K(long(C.k)) / K(long(P.mu))) * (P.lead.d / P.lead.v);
    };
    FamilyReport<K> rep;
    rep.lhs = s.d;
    rep.rhs = -(norm_rate(ct[std::size_t(a)]) + norm_rate(ct[std::size_t(b)])) * s.v;
    rep.ok = rep.lhs == rep.rhs;
    return rep;
}

template <class K>
struct RmatrixOdeReport {
    bool ok = true;
    int order = -1;
    int i = -1, j = -1;
    K lhs{}, rhs{};
};

// directional R-matrix equation: dRhat_k/dc = [Rhat_{k+1}, U'] - Rhat_k [Gamma, U']
// with U' = diag(du_i/dc) and Gamma the off-diagonal rotation coefficients.
template <class K>
RmatrixOdeReport<K> rmatrix_ode_check(const CurveFamily<K>& fam, int order) {
    int N = fam.jet.num_branches();
    RhatData<Jet<K>> R = rhat(fam.jet, order + 1);
    std::vector<K> du = du_dc(fam);
    Mat<K> gu(std::size_t(N), std::vector<K>(std::size_t(N), K(0)));  // [Gamma, U']
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (i != j)
                gu[std::size_t(i)][std::size_t(j)] =
                    fam.base.bergman_at_pair(i, j) * (du[std::size_t(j)] - du[std::size_t(i)]);
    for (int k = 0; k <= order; ++k) {
        const Mat<Jet<K>>& Rk = R.rhat.m[std::size_t(k)];
        const Mat<Jet<K>>& Rk1 = R.rhat.m[std::size_t(k + 1)];
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                K rhs = Rk1[std::size_t(i)][std::size_t(j)].v *
                            (du[std::size_t(j)] - du[std::size_t(i)]);
                for (int l = 0; l < N; ++l)
                    rhs -= Rk[std::size_t(i)][std::size_t(l)].v * gu[std::size_t(l)][std::size_t(j)];
                K lhs = Rk[std::size_t(i)][std::size_t(j)].d;
                if (!(lhs == rhs)) return {false, k, i, j, lhs, rhs};
            }
    }
    return {};
}

template <class K>
struct LgReport {
    bool ok = false;
    bool ambiguous = false;
    K mismatch_constant{};  // (lhs - rhs)/dx when constant, else unused
    bool constant_defect = false;
};

// d/dc[-y dx]|_{x-fixed} = sum_alpha dt_alpha/dc . phi^alpha as rational
// differentials, with dt_alpha/dc the jet of the flat coordinate
// t_alpha = C_alpha[dy] and the index raised by the flat metric.  The identity
// holds a priori only up to a constant multiple of dx; a nonzero constant is
// reported separately from a genuine mismatch.
template <class K>
LgReport<K> lg_deformation_check(const CurveFamily<K>& fam, TowerCtx& ctx) {
    std::vector<Contour> ct = contours(fam.jet);
    int N = int(ct.size());
    LgReport<K> rep;
    std::vector<K> dt;
    for (const Contour& C : ct) {
        ContourValue<Jet<K>> v = contour_value(fam.jet, C, fam.jet.dy, Poly<Jet<K>>(Jet<K>(1)));
        dt.push_back(v.value.d);
        rep.ambiguous = rep.ambiguous || v.ambiguous;
    }
    FrobeniusPoint<K> F = frobenius_point(fam.base);
    RatFun<K> rhs;  // sum_alpha dt_alpha phi^alpha, phi^alpha = eta^{alpha beta} phi_beta
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            rhs += dt[std::size_t(a)] * F.eta_inv[std::size_t(a)][std::size_t(b)] *
                   F.phi[std::size_t(b)];
    // lhs/dx = -(d/dc y)|_x = -(Yc - (dy/dz) xc / x')
    RatFun<K> xp = fam.base.x.derivative();
    RatFun<K> yc = rational_primitive(jet_derivative(fam.jet.dy), ctx);
    RatFun<K> L = yc - fam.base.dy * jet_derivative(fam.jet.x) / xp;
    RatFun<K> h = -L - rhs / xp;  // (lhs - rhs)/dx
    if (!h.derivative().num().is_zero()) {
        rep.ok = false;
        return rep;
    }
    if (!h.num().is_zero()) {
        rep.constant_defect = true;
        rep.mismatch_constant = (h * RatFun<K>(h.den())).num().coeff(0) / h.den().coeff(0);
    }
    rep.ok = !rep.constant_defect;
    return rep;
}

}

#endif
