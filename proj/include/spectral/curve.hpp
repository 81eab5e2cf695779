#ifndef SPECTRAL_CURVE_HPP
#define SPECTRAL_CURVE_HPP

#include <string>

#include "biseries.hpp"
#include "roots.hpp"

namespace spectral {

// Point of P^1.
template <class K>
struct Pt {
    bool inf = false;
    K a{};

    static Pt infinity() { return Pt{true, K(0)}; }
    static Pt finite(const K& v) { return Pt{false, v}; }

    friend bool operator==(const Pt& p, const Pt& q) {
        if (p.inf != q.inf) return false;
        return p.inf || p.a == q.a;
    }
    std::string str() const {
        if (inf) return "inf";
        return Ring<K>::value(a).str();
    }
};

// Mobius map used to bring a pair of chart centers to finite positions:
// either the identity or z -> 1/(z - c).
template <class K>
struct Mobius {
    bool invert = false;
    K c{};

    K apply_finite(const K& z) const {
        if (!invert) return z;
        return K(1) / (z - c);
    }
};

template <class K>
class Curve {
  public:
    struct Branch {
        Pt<K> loc;
        K u;            // critical value x(P_i)
        K branch_root;  // recorded sqrt(x''(P_i)) branch (in the t coordinate)
        Ser<K> zeta_of_t;
        Ser<K> t_of_zeta;
        K dy_value;     // dy(P_i) under the evaluation functional
    };
    struct Pole {
        Pt<K> loc;
        int mu = 0;     // pole order of x
        K lead;         // x ~ lead * w^{-mu}
        Ser<K> x_of_w;
    };

    TowerCtx* ctx = nullptr;
    RatFun<K> x, dy;
    int order = 0;
    std::vector<Branch> branches;
    std::vector<Pole> poles;

    int num_branches() const { return int(branches.size()); }
    int num_poles() const { return int(poles.size()); }

    // ---- local expansion helpers ------------------------------------------

    // p(z) expanded in the local coordinate t (t = z - a, or t = 1/z at inf).
    Ser<K> poly_series_at(const Poly<K>& p, const Pt<K>& c, int hi) const {
        if (p.is_zero() || hi <= 0) return Ser<K>::zero_to(std::max(hi, 0));
        if (!c.inf) {
            Poly<K> s = p.shifted(c.a);
            std::vector<K> v(hi, K(0));
            for (int e = 0; e <= s.deg() && e < hi; ++e) v[e] = s.coeff(e);
            return Ser<K>(0, hi, std::move(v));
        }
        int d = p.deg();
        if (hi <= -d) throw internal_consistency_error("window below polynomial degree");
        std::vector<K> v(hi + d, K(0));
        for (int e = 0; e <= d; ++e) v[d - e] = p.coeff(e);  // z^e -> t^{-e}
        return Ser<K>(-d, hi, std::move(v));
    }

    Ser<K> ratfun_series_at(const RatFun<K>& r, const Pt<K>& c, int hi) const {
        int buf = 2 * (std::max(0, r.num().deg()) + std::max(0, r.den().deg())) + 2;
        Ser<K> n = poly_series_at(r.num(), c, hi + buf);
        Ser<K> d = poly_series_at(r.den(), c, hi + buf);
        Ser<K> q = n * d.inv();
        if (q.hi() < hi) throw internal_consistency_error("rational expansion window shortfall");
        return q.truncated(hi);
    }

    // r(z)dz written as (series) dt in the local coordinate of c.
    Ser<K> diff_series_in_t(const RatFun<K>& r, const Pt<K>& c, int hi) const {
        if (!c.inf) return ratfun_series_at(r, c, hi);
        Ser<K> s = ratfun_series_at(r, c, hi + 2);
        return -s.shifted(-2);  // dz = -dt/t^2
    }

    // r(z)dz expanded at branch i as (series) dzeta.
    Ser<K> expand_diff_at_branch(const RatFun<K>& r, int i, int hi) const {
        const Branch& b = branches[std::size_t(i)];
        Ser<K> in_t = diff_series_in_t(r, b.loc, hi + 2);
        Ser<K> comp = compose(in_t, b.t_of_zeta);
        Ser<K> out = comp * b.t_of_zeta.derivative();
        if (out.hi() < hi) throw truncation_deficit("chart order too low for expansion");
        return out.truncated(hi);
    }

    // Evaluation functional of a differential expanded at a branch chart.
    static K evaluate(const Ser<K>& omega_zeta) { return omega_zeta.coeff(0); }

    // ---- Bergman kernel ---------------------------------------------------

    Mobius<K> mobius_for(const Pt<K>& p, const Pt<K>& q) const {
        if (!p.inf && !q.inf) return {};
        for (long c = 0;; ++c) {
            K kc = Ring<K>::from_scalar(Scalar(c));
            bool clash = false;
            if (!p.inf && !Ring<K>::is_unit(p.a - kc)) clash = true;
            if (!q.inf && !Ring<K>::is_unit(q.a - kc)) clash = true;
            if (!clash) return {true, kc};
        }
    }

    // w-coordinate image of the branch chart under m, as a series in zeta.
    Ser<K> w_of_zeta(int i, const Mobius<K>& m, int hi) const {
        const Branch& b = branches[std::size_t(i)];
        Ser<K> wt;  // m(z) as a series in the local coordinate t
        if (!m.invert) {
            if (b.loc.inf) throw internal_consistency_error("identity chart at infinity");
            wt = Ser<K>::constant(b.loc.a, hi + 2) + Ser<K>::monomial(1, K(1), hi + 2);
        } else {
            RatFun<K> mf(Poly<K>(K(1)),
                         Poly<K>(std::vector<K>{-m.c, K(1)}));  // 1/(z-c)
            wt = ratfun_series_at(mf, b.loc, hi + 2);
        }
        Ser<K> w = compose(wt, b.t_of_zeta);
        if (w.hi() < hi) throw truncation_deficit("chart order too low for Mobius image");
        return w.truncated(hi);
    }

    // B expanded at the chart pair (i, j) as the dzeta_i dzeta_j coefficient;
    // the diagonal (i == j) has the double pole 1/(zeta-zeta')^2 subtracted.
    BiSer<K> bergman_pair(int i, int j, int hi1, int hi2) const {
        Mobius<K> m = mobius_for(branches[std::size_t(i)].loc, branches[std::size_t(j)].loc);
        if (i != j) {
            int H1 = hi1 + 2, H2 = hi2 + 2;
            Ser<K> Wi = w_of_zeta(i, m, H1 + 1);
            Ser<K> Wj = w_of_zeta(j, m, H2 + 1);
            BiSer<K> D = BiSer<K>::from_var1(Wi, H2) - BiSer<K>::from_var2(Wj, H1 + 1);
            BiSer<K> Dinv = D.inv_cols();
            // W1'W2'/(W1-W2)^2 = -d/dz1 [1/(W1-W2)] * W2'(z2)
            BiSer<K> core = (-Dinv.derivative_var1()).mul_var2(Wj.derivative());
            return trim_bi(core, hi1, hi2);
        }
        int B2 = hi2 + 2;
        int A0 = hi1 + 2 * B2 + 2;
        Ser<K> W = w_of_zeta(i, m, A0 + B2 + 1);
        Ser<K> dW = W.derivative();
        BiSer<K> Q = diagonal_quotient(W, A0, B2);
        BiSer<K> Q2 = Q * Q;
        BiSer<K> Nu = BiSer<K>::outer_product(dW.truncated(A0), dW.truncated(B2)) - Q2;
        BiSer<K> U = divide_by_diagonal(divide_by_diagonal(Nu, A0 - B2 - 1, B2), hi1, B2);
        BiSer<K> reg = U * Q2.inv_cols();
        return trim_bi(reg, hi1, hi2);
    }

    // beta_ij building block B(P_i, P_j) for i != j.
    K bergman_at_pair(int i, int j) const {
        BiSer<K> b = bergman_pair(i, j, 1, 1);
        return b.coeff(0, 0);
    }

    // ---- structural checks ------------------------------------------------

    // Order of the differential r(z)dz at a point (negative = pole order).
    int diff_order_at(const RatFun<K>& r, const Pt<K>& c) const {
        Ser<K> s = diff_series_in_t(r, c, 2 * (r.num().deg() + r.den().deg()) + 6);
        int v = s.valuation();
        if (v >= s.hi()) throw internal_consistency_error("differential order: zero series");
        return v;
    }

    bool dominance() const {
        std::vector<Pt<K>> pts;
        if (!dy.is_zero()) {
            TowerCtx& cx = *ctx;
            for (auto& [rt, m] : RootFinder<K>::roots(dy.den(), cx))
                pts.push_back(Pt<K>::finite(rt));
        }
        pts.push_back(Pt<K>::infinity());
        RatFun<K> xp = x.derivative();
        for (const Pt<K>& p : pts) {
            int ody = diff_order_at(dy, p);
            if (ody >= 0) continue;
            int odx = diff_order_at(xp, p);
            if (!(odx <= ody)) return false;
        }
        return true;
    }

    struct CompatReport {
        bool ok = true;
        int chart = -1;
        int exponent = 0;
    };

    // omega(p) = d(dy/dx) + sum_i Res_{P_i} (dy/dx) B(p, .), tested for
    // sigma-invariance at every branch chart.
    CompatReport compatibility(int depth) const {
        RatFun<K> f = dy / x.derivative();
        RatFun<K> w = f.derivative();  // coefficient of dp in d(dy/dx)
        for (const Branch& b : branches) {
            Ser<K> ft = ratfun_series_at(f, b.loc, 2);
            int v = ft.valuation();
            for (int mm = 0; -1 - mm >= v; ++mm) {
                K coef = ft.coeff(-1 - mm);
                if (coef.is_zero()) continue;
                if (!b.loc.inf) {
                    // B(p, a+t) = sum_m (m+1) t^m dt / (p-a)^{m+2}
                    Poly<K> den(std::vector<K>{-b.loc.a, K(1)});
                    RatFun<K> Bm((Poly<K>(K(long(mm + 1)))));
                    for (int e = 0; e < mm + 2; ++e) Bm = Bm * RatFun<K>(Poly<K>(K(1)), den);
                    w += coef * Bm;
                } else {
                    // B(p, 1/t) d(1/t) = -sum_m (m+1) p^m t^m dt
                    w += coef * RatFun<K>(K(long(-(mm + 1))) * Poly<K>::monomial(mm));
                }
            }
        }
        for (int i = 0; i < num_branches(); ++i) {
            Ser<K> h = expand_diff_at_branch(w, i, depth);
            // odd zeta-exponents are sigma-invariant as differentials
            for (int e = h.lo(); e < h.hi(); ++e)
                if (e % 2 == 0 && !h.coeff(e).is_zero()) return {false, i, e};
        }
        return {};
    }

    // ---- analysis ---------------------------------------------------------

    static Curve analyze(const RatFun<K>& x, const RatFun<K>& dy, int order, TowerCtx& ctx) {
        if (x.num().deg() <= 0 && x.den().deg() <= 0)
            throw degeneracy_error("x must be nonconstant");
        Curve C;
        C.ctx = &ctx;
        C.x = x;
        C.dy = dy;
        C.order = order;

        // poles of x: infinity first when present, then finite poles in
        // descending lexicographic order of location
        std::vector<std::pair<Pt<K>, int>> poles;
        if (x.order_at_infinity() < 0)
            poles.emplace_back(Pt<K>::infinity(), -x.order_at_infinity());
        auto dr = RootFinder<K>::roots(x.den(), ctx);
        std::sort(dr.begin(), dr.end(), [](const auto& a, const auto& b) {
            return cmp_lex(Ring<K>::value(a.first), Ring<K>::value(b.first)) > 0;
        });
        for (auto& [rt, m] : dr) poles.emplace_back(Pt<K>::finite(rt), m);

        // branch points: finite roots of num(x') that are not poles of x,
        // plus possibly a critical point at infinity
        std::vector<Pt<K>> blocs;
        RatFun<K> xp = x.derivative();
        auto br = RootFinder<K>::roots(xp.num(), ctx);
        std::sort(br.begin(), br.end(), [](const auto& a, const auto& b) {
            return cmp_lex(Ring<K>::value(a.first), Ring<K>::value(b.first)) > 0;
        });
        for (auto& [rt, m] : br) {
            if (!Ring<K>::is_unit(x.den().eval(rt))) continue;  // pole of x
            if (m != 1)
                throw degeneracy_error("non-simple zero of dx at z = " +
                                       Ring<K>::value(rt).str());
            blocs.push_back(Pt<K>::finite(rt));
        }
        if (x.order_at_infinity() >= 0) {
            Ser<K> s = C.ratfun_series_at(x, Pt<K>::infinity(), 4);
            Ser<K> dev = s - Ser<K>::constant(s.coeff(0), s.hi());
            int v = dev.valuation();
            if (v == 2) blocs.push_back(Pt<K>::infinity());
            else if (v > 2) throw degeneracy_error("non-simple zero of dx at z = inf");
        }

        int H = order;
        for (const Pt<K>& loc : blocs) {
            Branch b;
            b.loc = loc;
            Ser<K> xs = C.ratfun_series_at(x, loc, H + 4);
            b.u = xs.coeff(0);
            Ser<K> X = xs - Ser<K>::constant(b.u, xs.hi());
            if (X.valuation() != 2)
                throw degeneracy_error("branch chart at z = " + loc.str() +
                                       ": x - u does not vanish to order exactly 2");
            Ser<K> zeta = (Ring<K>::from_scalar(Scalar(2)) * X).sqrt(ctx);
            b.branch_root = zeta.coeff(1);
            b.zeta_of_t = zeta;
            b.t_of_zeta = series_invert(zeta, H + 2);
            C.branches.push_back(std::move(b));
        }
        if (C.branches.empty()) throw degeneracy_error("curve has no branch points");

        for (auto& [loc, mu] : poles) {
            Pole P;
            P.loc = loc;
            P.mu = mu;
            P.x_of_w = C.ratfun_series_at(x, loc, H);
            if (P.x_of_w.valuation() != -mu)
                throw internal_consistency_error("pole order mismatch");
            P.lead = P.x_of_w.coeff(-mu);
            C.poles.push_back(std::move(P));
        }

        // dy analytic and nonvanishing at each P_i
        for (std::size_t i = 0; i < C.branches.size(); ++i) {
            Ser<K> ds = C.expand_diff_at_branch(dy, int(i), 2);
            if (ds.valuation() != 0)
                throw admissibility_error("dy not analytic-nonvanishing at branch " +
                                          C.branches[i].loc.str());
            C.branches[i].dy_value = ds.coeff(0);
        }

        // genus-0 count: N = d - 2 + |mu|
        int expect = int(C.poles.size()) - 2;
        for (const Pole& P : C.poles) expect += P.mu;
        if (expect != int(C.branches.size()))
            throw internal_consistency_error("branch count does not match d - 2 + |mu|");
        return C;
    }

  private:
    static BiSer<K> trim_bi(const BiSer<K>& b, int hi1, int hi2) {
        if (b.hi1() < hi1 || b.hi2() < hi2)
            throw truncation_deficit("Bergman expansion window shortfall");
        int lo1 = std::min(b.lo1(), hi1), lo2 = std::min(b.lo2(), hi2);
        BiSer<K> r(lo1, hi1, lo2, hi2);
        for (int e1 = lo1; e1 < hi1; ++e1)
            for (int e2 = lo2; e2 < hi2; ++e2) r.at(e1, e2) = b.coeff_window(e1, e2);
        return r;
    }

  public:
    // (W(z1)-W(z2))/(z1-z2) as a biseries on the rectangle [0,H1)x[0,H2);
    // coefficient (p, q) is W_{p+q+1}, so the window needs H1 + H2 <= W.hi().
    static BiSer<K> diagonal_quotient(const Ser<K>& W, int H1, int H2) {
        if (H1 + H2 > W.hi())
            throw truncation_deficit("diagonal quotient window shortfall");
        BiSer<K> Q(0, H1, 0, H2);
        for (int p = 0; p < H1; ++p)
            for (int q = 0; q < H2; ++q) Q.at(p, q) = W.coeff(p + q + 1);
        return Q;
    }

    // U on [0,h1)x[0,h2) with T = (z1 - z2) U, for T vanishing on the diagonal.
    // From T(a,b) = U(a-1,b) - U(a,b-1): U(a,b) = sum_{j=0..b} T(a+1+j, b-j).
    static BiSer<K> divide_by_diagonal(const BiSer<K>& T, int h1, int h2) {
        if (h1 + h2 > T.hi1() || h2 > T.hi2())
            throw truncation_deficit("diagonal division window shortfall");
        BiSer<K> U(0, h1, 0, h2);
        for (int a = 0; a < h1; ++a)
            for (int b = 0; b < h2; ++b) {
                K s(0);
                for (int j = 0; j <= b; ++j) s += T.coeff_window(a + 1 + j, b - j);
                U.at(a, b) = s;
            }
        return U;
    }
};

}

#endif
