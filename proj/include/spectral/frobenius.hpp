#ifndef SPECTRAL_FROBENIUS_HPP
#define SPECTRAL_FROBENIUS_HPP

#include <string>
#include <vector>

#include "curve.hpp"
#include "linalg.hpp"

namespace spectral {

// Generalised contour: a residue functional at a pole of x (weighted by a
// fractional power of x for type 1, by x itself for type 2) or a regularized
// path between the first pole and another one (type 3).
struct Contour {
    int type = 1;  // 1, 2 or 3
    int pole = 0;  // index into curve.poles
    int k = 0;     // type-1 exponent, 1..mu-1

    std::string str() const {
        return "type" + std::to_string(type) + "(pole=" + std::to_string(pole) +
               (type == 1 ? ",k=" + std::to_string(k) : "") + ")";
    }
};

// Full genus-0 contour set; its cardinality must equal the branch count.
template <class K>
std::vector<Contour> contours(const Curve<K>& c) {
    std::vector<Contour> out;
    for (int p = 0; p < c.num_poles(); ++p)
        for (int k = 1; k < c.poles[std::size_t(p)].mu; ++k) out.push_back({1, p, k});
    for (int p = 1; p < c.num_poles(); ++p) out.push_back({2, p, 0});
    for (int p = 1; p < c.num_poles(); ++p) out.push_back({3, p, 0});
    if (int(out.size()) != c.num_branches())
        throw internal_consistency_error("contour count differs from branch count");
    return out;
}

// Second-slot expansion kernel of the genus-0 Bergman kernel at a pole chart:
// the residue Res_w w^{-1-m} B(p, w-chart) as a rational differential in p.
template <class K>
RatFun<K> b_second_slot_kernel(const Pt<K>& c, int m) {
    if (c.inf) return RatFun<K>(Poly<K>(K(long(-(m + 1)))) * Poly<K>::monomial(m));
    RatFun<K> r(Poly<K>(K(long(m + 1))));
    Poly<K> den(std::vector<K>{-c.a, K(1)});
    for (int e = 0; e < m + 2; ++e) r = r * RatFun<K>(Poly<K>(K(1)), den);
    return r;
}

namespace detail {

// type-1 weight (x/lead)^{k/mu} and type-2 weight x, as Laurent series in the
// pole-chart coordinate w.
template <class K>
Ser<K> contour_weight(const Curve<K>& c, const Contour& C) {
    const auto& P = c.poles[std::size_t(C.pole)];
    if (C.type == 2) return P.x_of_w;
    Ser<K> unit = ((K(1) / P.lead) * P.x_of_w).shifted(P.mu);  // 1 + O(w)
    return unit.pow_rat(Rat(C.k, P.mu)).shifted(-C.k);
}

}

// phi_C(p) = C[B(p, .)]: the primary differential of a contour, exactly
// rational at genus 0.
template <class K>
RatFun<K> primary_differential(const Curve<K>& c, const Contour& C) {
    if (C.type == 3) {
        auto endpoint = [](const Pt<K>& e) {
            if (e.inf) return RatFun<K>();
            return RatFun<K>(Poly<K>(K(1)), Poly<K>(std::vector<K>{-e.a, K(1)}));
        };
        return endpoint(c.poles[std::size_t(C.pole)].loc) - endpoint(c.poles[0].loc);
    }
    Ser<K> W = detail::contour_weight(c, C);
    const Pt<K>& loc = c.poles[std::size_t(C.pole)].loc;
    RatFun<K> out;
    for (int m = 0; m < -W.lo(); ++m)
        out += W.coeff(-1 - m) * b_second_slot_kernel(loc, m);
    return out;
}

template <class K>
struct ContourValue {
    K value{};
    bool ambiguous = false;  // a log-regularization choice entered the value
};

namespace detail {

// Regularized value at a pole of x of a global primitive of the rational
// differential r(z)dz: the constant term of its expansion there, all terms
// unbounded in x discarded.  Principal parts are taken over the known pole
// candidates (poles of x and branch points); log terms flag ambiguity.
template <class K>
class PrimitiveTable {
  public:
    PrimitiveTable(const Curve<K>& c, const RatFun<K>& r) : curve_(&c) {
        for (const auto& p : c.poles)
            if (!p.loc.inf) add_spot(p.loc.a);
        for (const auto& b : c.branches)
            if (!b.loc.inf) add_spot(b.loc.a);
        int H = 2 * (std::max(0, r.num().deg()) + std::max(0, r.den().deg())) + 4;
        RatFun<K> rebuilt;
        for (const K& a : spots_) {
            Ser<K> s = c.ratfun_series_at(r, Pt<K>::finite(a), 1);
            std::vector<K> pp;
            for (int j = 1; j <= -s.lo(); ++j) pp.push_back(s.coeff(-j));
            if (!pp.empty() && !pp[0].is_zero()) ambiguous_ = true;
            Poly<K> den(std::vector<K>{-a, K(1)});
            RatFun<K> pw(Poly<K>(K(1)), den);
            for (std::size_t j = 0; j < pp.size(); ++j) {
                rebuilt += pp[j] * pw;
                pw = pw * RatFun<K>(Poly<K>(K(1)), den);
            }
            principal_.push_back(std::move(pp));
        }
        // polynomial part from the expansion at infinity
        Ser<K> at_inf = c.ratfun_series_at(r, Pt<K>::infinity(), H);
        for (int e = 0; e <= -at_inf.lo(); ++e)
            poly_part_ = poly_part_ + Poly<K>::monomial(e, at_inf.coeff(-e));
        if (!((r - rebuilt - RatFun<K>(poly_part_)).num().is_zero()))
            throw admissibility_error("differential has poles outside the curve data");
        for (int e = 0; e <= poly_part_.deg(); ++e)
            primitive_poly_ = primitive_poly_ +
                              Poly<K>::monomial(e + 1, poly_part_.coeff(e) / K(long(e + 1)));
    }

    bool ambiguous() const { return ambiguous_; }

    // constant term of the primitive at the pole location b
    K value_at(const Pt<K>& b) const {
        if (b.inf) return K(0);  // primitive chosen with zero constant
        K v = primitive_poly_.eval(b.a);
        for (std::size_t s = 0; s < spots_.size(); ++s) {
            if (spots_[s] == b.a) continue;
            K d = b.a - spots_[s];
            K pw = K(1) / d;
            for (std::size_t j = 1; j < principal_[s].size(); ++j) {
                v -= principal_[s][j] * pw / K(long(j));
                pw = pw / d;
            }
        }
        return v;
    }

  private:
    void add_spot(const K& a) {
        for (const K& s : spots_)
            if (s == a) return;
        spots_.push_back(a);
    }

    const Curve<K>* curve_;
    std::vector<K> spots_;
    std::vector<std::vector<K>> principal_;  // [spot][j-1] = coeff of (z-a)^{-1-(j-1)}
    Poly<K> poly_part_, primitive_poly_;
    bool ambiguous_ = false;
};

}

// C[q(x) . f]: the contour functional applied to a rational differential f,
// with an extra polynomial weight q in x (q = 1 for plain pairings).
template <class K>
ContourValue<K> contour_value(const Curve<K>& c, const Contour& C, const RatFun<K>& f,
                              const Poly<K>& q_of_x) {
    RatFun<K> g = f;
    if (!(q_of_x.deg() == 0 && q_of_x.coeff(0) == K(1))) {
        RatFun<K> qx;
        for (int r = 0; r <= q_of_x.deg(); ++r)
            qx += q_of_x.coeff(r) * c.x.pow_int(r);
        g = g * qx;
    }
    if (C.type == 3) {
        detail::PrimitiveTable<K> P(c, g);
        K v = P.value_at(c.poles[std::size_t(C.pole)].loc) - P.value_at(c.poles[0].loc);
        return {v, P.ambiguous()};
    }
    Ser<K> W = detail::contour_weight(c, C);
    const Pt<K>& loc = c.poles[std::size_t(C.pole)].loc;
    Ser<K> gs = c.diff_series_in_t(g, loc, -W.lo() + 2);
    Ser<K> prod = W.truncated(std::min(W.hi(), -gs.lo() + 2)) * gs;
    return {prod.coeff(-1), false};
}

// Hurwitz-Frobenius data at the curve: canonical coordinates, metric,
// transition matrix, rotation coefficients, contours, primary differentials,
// flat coordinates and the dy-decomposition.
template <class K>
struct FrobeniusPoint {
    std::vector<K> u, eta_canonical;
    Mat<K> beta;         // rotation coefficients, diagonal not part of the data
    Mat<K> psi;          // psi[i][alpha] = phi_alpha(P_i)
    Mat<K> eta_flat;     // eta[alpha][beta]
    Mat<K> eta_inv;
    Mat<K> dual;         // dual[i][alpha]: C*_i = sum_alpha dual[i][alpha] C_alpha
    std::vector<Contour> cont;
    std::vector<RatFun<K>> phi;
    bool dy_in_span = false;
    std::vector<K> lambda;  // dy = sum_alpha lambda[alpha] phi_alpha, if in span
    std::vector<ContourValue<K>> t;  // flat coordinates t_alpha = C_alpha[dy]

    const std::vector<K>& dy_decomposition() const {
        if (!dy_in_span)
            throw admissibility_error("dy is not a combination of primary differentials");
        return lambda;
    }
};

template <class K>
FrobeniusPoint<K> frobenius_point(const Curve<K>& c) {
    FrobeniusPoint<K> F;
    int N = c.num_branches();
    for (int i = 0; i < N; ++i) {
        F.u.push_back(c.branches[std::size_t(i)].u);
        const K& d = c.branches[std::size_t(i)].dy_value;
        F.eta_canonical.push_back(d * d);
        for (int j = 0; j < i; ++j)
            if (F.u[std::size_t(i)] == F.u[std::size_t(j)])
                throw non_semisimple_error("coincident canonical coordinates");
    }
    F.beta = Mat<K>(std::size_t(N), std::vector<K>(std::size_t(N), K(0)));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (i != j) F.beta[std::size_t(i)][std::size_t(j)] = c.bergman_at_pair(i, j);
    F.cont = contours(c);
    for (const Contour& C : F.cont) F.phi.push_back(primary_differential(c, C));
    // Psi and the flat metric, computed both ways
    F.psi = Mat<K>(std::size_t(N), std::vector<K>(std::size_t(N), K(0)));
    std::vector<std::vector<Ser<K>>> phis;
    phis.resize(std::size_t(N));
    for (int i = 0; i < N; ++i) {
        for (int a = 0; a < N; ++a) {
            phis[std::size_t(i)].push_back(
                c.expand_diff_at_branch(F.phi[std::size_t(a)], i, 6));
            F.psi[std::size_t(i)][std::size_t(a)] =
                Curve<K>::evaluate(phis[std::size_t(i)][std::size_t(a)]);
        }
    }
    F.eta_flat = Mat<K>(std::size_t(N), std::vector<K>(std::size_t(N), K(0)));
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            K s(0), r(0);
            for (int i = 0; i < N; ++i) {
                s += F.psi[std::size_t(i)][std::size_t(a)] *
                     F.psi[std::size_t(i)][std::size_t(b)];
                // residue route: Res phi_a phi_b / dx with dx = zeta dzeta
                Ser<K> m = phis[std::size_t(i)][std::size_t(a)] *
                           phis[std::size_t(i)][std::size_t(b)];
                r += m.shifted(-1).coeff(-1);
            }
            if (!(s == r))
                throw internal_consistency_error("metric routes disagree");
            F.eta_flat[std::size_t(a)][std::size_t(b)] = s;
        }
    F.eta_inv = mat_inverse(F.eta_flat);  // throws on a degenerate metric
    F.dual = mat_mul(F.psi, F.eta_inv);
    // dy as a combination of the primary differentials: candidate from the
    // branch-point values, then verified as a rational identity
    Mat<K> rhs(std::size_t(N), std::vector<K>(1));
    for (int i = 0; i < N; ++i)
        rhs[std::size_t(i)][0] = c.branches[std::size_t(i)].dy_value;
    Mat<K> lam = mat_solve(F.psi, rhs);
    RatFun<K> recon;
    for (int a = 0; a < N; ++a) {
        F.lambda.push_back(lam[std::size_t(a)][0]);
        recon += F.lambda[std::size_t(a)] * F.phi[std::size_t(a)];
    }
    F.dy_in_span = (c.dy - recon).num().is_zero();
    if (!F.dy_in_span) F.lambda.clear();
    for (const Contour& C : F.cont)
        F.t.push_back(contour_value(c, C, c.dy, Poly<K>(K(1))));
    return F;
}

// C_{abc} = sum_i Res_{P_i} phi_a phi_b phi_c / (dx dy)
template <class K>
K three_point(const Curve<K>& c, const FrobeniusPoint<K>& F, int a, int b, int g) {
    K out(0);
    for (int i = 0; i < c.num_branches(); ++i) {
        int H = 6;
        Ser<K> m = c.expand_diff_at_branch(F.phi[std::size_t(a)], i, H) *
                   c.expand_diff_at_branch(F.phi[std::size_t(b)], i, H) *
                   c.expand_diff_at_branch(F.phi[std::size_t(g)], i, H);
        Ser<K> den = Ser<K>::monomial(1, K(1), H) * c.expand_diff_at_branch(c.dy, i, H);
        out += (m * den.inv()).coeff(-1);
    }
    return out;
}

// ---- formal Laplace transform and the R-matrix -----------------------------

template <class K>
struct MatSeries {
    int order = 0;          // coefficients 0..order
    std::vector<Mat<K>> m;  // m[k] is the z^k coefficient
};

template <class K>
struct RhatData {
    MatSeries<K> rhat;  // R^(z)
    MatSeries<K> rinv;  // R^(z)^{-1}
};

namespace detail {

// chart-j expansion of B(., P_i): the Laplace transform only needs this
// univariate column, never the full bivariate kernel.
template <class K>
Ser<K> laplace_column(const Curve<K>& c, int j, int i, int hi) {
    Mobius<K> m = c.mobius_for(c.branches[std::size_t(j)].loc,
                               c.branches[std::size_t(i)].loc);
    Ser<K> Wj = c.w_of_zeta(j, m, hi + 4);
    Ser<K> Wi = c.w_of_zeta(i, m, 3);
    K c0 = Wi.coeff(0), c1 = Wi.coeff(1);
    Ser<K> d = Wj - Ser<K>::constant(c0, Wj.hi());
    Ser<K> col = (c1 * Wj.derivative()) * (d * d).inv();
    if (i == j) col = col - Ser<K>::monomial(-2, K(1), col.hi());
    return col.truncated(hi);
}

inline Rat double_factorial(int m) {  // (2m-1)!!
    Rat r(1);
    for (int j = 1; j <= 2 * m - 1; j += 2) r *= Rat(j);
    return r;
}

}

// R^(z)^{-1} by termwise Gaussian moments of the Bergman columns:
// [R^{-1}]^i_j = delta_ij - sum_m b^{(j,i)}_{2m,0} (2m-1)!! z^{m+1}, the
// diagonal's subtracted double pole supplying the identity constant.
template <class K>
RhatData<K> rhat(const Curve<K>& c, int order) {
    int N = c.num_branches();
    RhatData<K> R;
    R.rinv.order = R.rhat.order = order;
    R.rinv.m.assign(std::size_t(order + 1),
                    Mat<K>(std::size_t(N), std::vector<K>(std::size_t(N), K(0))));
    R.rinv.m[0] = mat_identity<K>(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            Ser<K> col = detail::laplace_column(c, j, i, 2 * order + 1);
            for (int m = 0; m + 1 <= order; ++m)
                R.rinv.m[std::size_t(m + 1)][std::size_t(i)][std::size_t(j)] =
                    -col.coeff(2 * m) * K(detail::double_factorial(m));
        }
    R.rhat.m.assign(std::size_t(order + 1), Mat<K>());
    R.rhat.m[0] = mat_identity<K>(N);
    for (int k = 1; k <= order; ++k) {
        Mat<K> s(std::size_t(N), std::vector<K>(std::size_t(N), K(0)));
        for (int l = 1; l <= k; ++l) {
            Mat<K> p = mat_mul(R.rinv.m[std::size_t(l)], R.rhat.m[std::size_t(k - l)]);
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b)
                    s[std::size_t(a)][std::size_t(b)] -= p[std::size_t(a)][std::size_t(b)];
        }
        R.rhat.m[std::size_t(k)] = std::move(s);
    }
    // [R^_1]^i_j must be the rotation coefficient B(P_i, P_j) off-diagonal
    if (order >= 1)
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                if (i != j &&
                    !(R.rhat.m[1][std::size_t(i)][std::size_t(j)] == c.bergman_at_pair(i, j)))
                    throw internal_consistency_error("R1 differs from B(P_i,P_j)");
    return R;
}

// R^(z) R^T(-z) = Id through the computed order.
template <class K>
bool symplectic_check(const MatSeries<K>& R) {
    int N = int(R.m[0].size());
    for (int k = 0; k <= R.order; ++k)
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                K s(0);
                for (int a = 0; a <= k; ++a) {
                    int b = k - a;
                    K sign = (b % 2 == 0) ? K(1) : K(-1);
                    for (int l = 0; l < N; ++l)
                        s += sign * R.m[std::size_t(a)][std::size_t(i)][std::size_t(l)] *
                             R.m[std::size_t(b)][std::size_t(j)][std::size_t(l)];
                }
                K want = (k == 0 && i == j) ? K(1) : K(0);
                if (!(s == want)) return false;
            }
    return true;
}

// (z1+z2) Bcheck^{i,j}(z1,z2) = -sum_k [R^{-1}(z1)]^k_i [R^{-1}(z2)]^k_j with
// Bcheck = termwise double Gaussian transform of B minus delta_ij/(z1+z2).
template <class K>
bool factorization_check(const Curve<K>& c, const RhatData<K>& R, int total_order) {
    int N = c.num_branches();
    int H = 2 * total_order + 2;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            BiSer<K> b = c.bergman_pair(i, j, H, H);
            auto breg = [&](int m1, int m2) {
                return b.coeff_window(2 * m1, 2 * m2) *
                       K(detail::double_factorial(m1) * detail::double_factorial(m2));
            };
            for (int m1 = 0; m1 + 0 <= total_order; ++m1)
                for (int m2 = 0; m1 + m2 <= total_order; ++m2) {
                    // z1^m1 z2^m2 coefficient of both sides
                    K lhs(0);
                    if (m1 >= 1) lhs += breg(m1 - 1, m2);
                    if (m2 >= 1) lhs += breg(m1, m2 - 1);
                    if (m1 == 0 && m2 == 0 && i == j) lhs -= K(1);
                    K rhs(0);
                    if (m1 <= R.rinv.order && m2 <= R.rinv.order)
                        for (int l = 0; l < N; ++l)
                            rhs -= R.rinv.m[std::size_t(m1)][std::size_t(l)][std::size_t(i)] *
                                   R.rinv.m[std::size_t(m2)][std::size_t(l)][std::size_t(j)];
                    if (!(lhs == rhs)) return false;
                }
        }
    return true;
}

}

#endif
