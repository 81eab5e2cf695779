#ifndef SPECTRAL_BASIS_HPP
#define SPECTRAL_BASIS_HPP

#include "curve.hpp"

namespace spectral {

// slot index (branch, k) into the principal-part basis
struct BIdx {
    int i = 0;
    int k = 0;
    friend bool operator==(const BIdx& a, const BIdx& b) { return a.i == b.i && a.k == b.k; }
    friend bool operator<(const BIdx& a, const BIdx& b) {
        return a.i != b.i ? a.i < b.i : a.k < b.k;
    }
};

// Global rational realizations of the principal-part basis dxi^i_k (pole only
// at P_i, principal part zeta^{-(2k+2)} dzeta, residueless) and of the
// derivative basis V^i_0 = B(P_i,.), V^i_{k+1} = d(V^i_k/dx), together with
// chart expansion tables for both.
template <class K>
class DiffBasis {
  public:
    const Curve<K>* curve = nullptr;
    int kmax = 0;
    int order = 0;
    std::vector<std::vector<RatFun<K>>> dxi;  // [branch][k]
    std::vector<std::vector<RatFun<K>>> v;    // [branch][k]
    std::vector<std::vector<std::vector<Ser<K>>>> dxi_exp;  // [chart][branch][k]
    std::vector<std::vector<std::vector<Ser<K>>>> v_exp;    // [chart][branch][k]

    int num_branches() const { return curve->num_branches(); }

    const Ser<K>& expansion(int chart, const BIdx& s) const {
        return dxi_exp[std::size_t(chart)][std::size_t(s.i)][std::size_t(s.k)];
    }
    const Ser<K>& v_expansion(int chart, const BIdx& s) const {
        return v_exp[std::size_t(chart)][std::size_t(s.i)][std::size_t(s.k)];
    }
};

// The unique genus-0 differential with principal part zeta_i^{-(2k+2)} dzeta_i
// at P_i and no other pole: re-express the principal part of the chart
// differential in the global coordinate.
template <class K>
RatFun<K> dxi_differential(const Curve<K>& C, int i, int k) {
    const auto& b = C.branches[std::size_t(i)];
    const Ser<K>& z = b.zeta_of_t;
    Ser<K> zi2 = (z * z).inv();
    Ser<K> f = z.derivative();
    for (int r = 0; r <= k; ++r) f = f * zi2;
    if (f.valuation() != -(2 * k + 2))
        throw internal_consistency_error("principal part order mismatch");
    if (!f.coeff(-1).is_zero())
        throw internal_consistency_error("principal part carries a residue");
    RatFun<K> out;
    if (!b.loc.inf) {
        RatFun<K> g(Poly<K>(K(1)), Poly<K>(std::vector<K>{-b.loc.a, K(1)}));
        RatFun<K> pw = g * g;
        for (int j = 2; j <= 2 * k + 2; ++j) {
            out += f.coeff(-j) * pw;
            pw = pw * g;
        }
    } else {
        // t^{-j} dt = -z^{j-2} dz
        for (int j = 2; j <= 2 * k + 2; ++j)
            out += (-f.coeff(-j)) * RatFun<K>(Poly<K>::monomial(j - 2));
    }
    return out;
}

template <class K>
DiffBasis<K> make_basis(const Curve<K>& C, int kmax, int order) {
    DiffBasis<K> B;
    B.curve = &C;
    B.kmax = kmax;
    B.order = order;
    int N = C.num_branches();
    RatFun<K> xp = C.x.derivative();
    for (int i = 0; i < N; ++i) {
        std::vector<RatFun<K>> dx_row, v_row;
        for (int k = 0; k <= kmax; ++k) dx_row.push_back(dxi_differential(C, i, k));
        v_row.push_back(dx_row[0]);
        for (int k = 1; k <= kmax; ++k) v_row.push_back((v_row.back() / xp).derivative());
        B.dxi.push_back(std::move(dx_row));
        B.v.push_back(std::move(v_row));
    }
    for (int c = 0; c < N; ++c) {
        std::vector<std::vector<Ser<K>>> de, ve;
        for (int j = 0; j < N; ++j) {
            std::vector<Ser<K>> dr, vr;
            for (int k = 0; k <= kmax; ++k) {
                dr.push_back(C.expand_diff_at_branch(B.dxi[j][k], c, order));
                vr.push_back(C.expand_diff_at_branch(B.v[j][k], c, order));
            }
            de.push_back(std::move(dr));
            ve.push_back(std::move(vr));
        }
        B.dxi_exp.push_back(std::move(de));
        B.v_exp.push_back(std::move(ve));
    }
    // structural checks: exact principal parts, no residues, no foreign poles
    for (int c = 0; c < N; ++c)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k <= kmax; ++k) {
                const Ser<K>& e = B.dxi_exp[c][j][k];
                for (int x = e.lo(); x < 0; ++x) {
                    K want = (c == j && x == -(2 * k + 2)) ? K(1) : K(0);
                    if (!(e.coeff(x) == want))
                        throw internal_consistency_error("dxi principal part mismatch");
                }
                if (!B.v_exp[c][j][k].coeff(-1).is_zero())
                    throw internal_consistency_error("V basis carries a residue");
            }
    return B;
}

}

#endif
