#ifndef SPECTRAL_INVARIANTS_HPP
#define SPECTRAL_INVARIANTS_HPP

#include "frobenius.hpp"
#include "recursion.hpp"

namespace spectral {

enum class InvBasis { canonical, flat, dual };

// Invariant table of a stable (g,n): map from sorted tuples of (vector index,
// psi-power) to the common tensor value.  `ambiguous` records whether a
// log-regularized path integral entered any pairing behind the table.
template <class K>
struct InvariantTable {
    int g = 0;
    int n = 0;
    InvBasis basis = InvBasis::flat;
    bool ambiguous = false;
    std::map<std::vector<BIdx>, K> c;

    K coeff(std::vector<BIdx> t) const {
        std::sort(t.begin(), t.end());
        auto it = c.find(t);
        return it == c.end() ? K(0) : it->second;
    }
};

// Local primitives of a rational differential at every branch chart; the
// integration constants are immaterial when paired against residueless
// differentials.
template <class K>
std::vector<Ser<K>> chart_primitives(const Curve<K>& c, const RatFun<K>& phi, int order) {
    std::vector<Ser<K>> out;
    for (int i = 0; i < c.num_branches(); ++i)
        out.push_back(c.expand_diff_at_branch(phi, i, order).antiderivative());
    return out;
}

// One contour pairing applied to one slot: sum_i Res_{P_i} f_C . omega with
// f_C the chart primitives of the contour's primary differential.
template <class K>
std::map<std::vector<BIdx>, K> pair_contour(const Recursion<K>& rec, const Correlator<K>& W,
                                            const RatFun<K>& phi) {
    return rec.apply_functional(W, chart_primitives(rec.curve(), phi, rec.basis().order));
}

// Extraction of primary and ancestor invariants from the correlators.
//
// The slot functional for the (i,k) ancestor insertion is a generalized dual
// contour: a combination of the curve's contours weighted by polynomials in x
// of degree <= kcap, solved from the square linear system
//     T_{i,k}[ V^j_m ] = delta_ij delta_km,   m <= kcap,
// where each weighted pairing is the exact contour value (residue at the pole
// for residue-type contours, regularized path integral otherwise).  A single
// monic polynomial times one contour cannot satisfy these conditions -- the
// weighted pairings mix branches -- but the full system is square and its
// matrix inherits triangularity in the psi-power (pairings vanish for
// m > weight degree), so the solution exists and the k = 0 functionals reduce
// to the plain dual contour combinations.
template <class K>
class Invariants {
  public:
    Invariants(Recursion<K>& rec, const FrobeniusPoint<K>& frob)
        : rec_(&rec), frob_(&frob), kcap_(rec.kcap()) {
        const Curve<K>& c = rec.curve();
        int N = c.num_branches();
        std::size_t dim = std::size_t(N * (kcap_ + 1));
        pv_ = Mat<K>(dim, std::vector<K>(dim, K(0)));
        pd_ = Mat<K>(dim, std::vector<K>(dim, K(0)));
        for (int b = 0; b < N; ++b)
            for (int r = 0; r <= kcap_; ++r) {
                Poly<K> xr = Poly<K>::monomial(r, K(1));
                for (int j = 0; j < N; ++j)
                    for (int m = 0; m <= kcap_; ++m) {
                        auto cv = contour_value(c, frob.cont[std::size_t(b)],
                                                rec.basis().v[std::size_t(j)][std::size_t(m)],
                                                xr);
                        pv_[idx(b, r)][idx(j, m)] = cv.value;
                        auto cd = contour_value(c, frob.cont[std::size_t(b)],
                                                rec.basis().dxi[std::size_t(j)][std::size_t(m)],
                                                xr);
                        pd_[idx(b, r)][idx(j, m)] = cd.value;
                        ambiguous_ = ambiguous_ || cv.ambiguous || cd.ambiguous;
                    }
            }
        // solve A w = e_(i,k) with A[(j,m)][(b,r)] = pairing of x^r C_b with V^j_m
        Mat<K> A(dim, std::vector<K>(dim, K(0)));
        for (std::size_t p = 0; p < dim; ++p)
            for (std::size_t q = 0; q < dim; ++q) A[p][q] = pv_[q][p];
        try {
            tw_ = mat_inverse(A);  // tw_[(b,r)][(i,k)]
        } catch (const singular_jacobian_error&) {
            throw internal_consistency_error("ancestor pairing system is singular");
        }
        // contour values of the dxi realizations under the slot functionals
        tdxi_ = Mat<K>(dim, std::vector<K>(dim, K(0)));
        for (std::size_t t = 0; t < dim; ++t)
            for (std::size_t s = 0; s < dim; ++s) {
                K v(0);
                for (std::size_t w = 0; w < dim; ++w) v += tw_[w][t] * pd_[w][s];
                tdxi_[t][s] = v;
            }
    }

    int kcap() const { return kcap_; }
    bool ambiguous() const { return ambiguous_; }

    // polynomial contour weights of the (i,k) slot functional, one per contour
    std::vector<Poly<K>> slot_weights(int i, int k) const {
        std::vector<Poly<K>> out;
        for (int b = 0; b < num_branches(); ++b) {
            Poly<K> q;
            for (int r = 0; r <= kcap_; ++r)
                q = q + Poly<K>::monomial(r, tw_[idx(b, r)][idx(i, k)]);
            out.push_back(q);
        }
        return out;
    }

    // defining property: slot functionals against the V realizations = identity
    bool biorthogonal() const {
        std::size_t dim = pv_.size();
        for (std::size_t t = 0; t < dim; ++t)
            for (std::size_t s = 0; s < dim; ++s) {
                K v(0);
                for (std::size_t w = 0; w < dim; ++w) v += tw_[w][t] * pv_[w][s];
                if (!(v == (t == s ? K(1) : K(0)))) return false;
            }
        return true;
    }

    // ancestor table by nested contour pairings of omega_{g,n}
    InvariantTable<K> ancestors(int g, int n, InvBasis basis) {
        const Correlator<K>& W = rec_->omega(g, n);
        auto cur = map_slots(W.c, n, tdxi_, "ancestor table lost symmetry");
        return convert(g, n, basis, std::move(cur), ambiguous_);
    }

    // the same table from the V-basis coefficient tensor of the recursion
    InvariantTable<K> ancestors_from_tensor(int g, int n, InvBasis basis) {
        Correlator<K> V = rec_->change_basis_to_V(rec_->omega(g, n));
        return convert(g, n, basis, std::move(V.c), false);
    }

    // primary invariants via the residue functionals sum_i Res y_alpha .
    InvariantTable<K> primary(int g, int n, InvBasis basis) {
        const Correlator<K>& W = rec_->omega(g, n);
        int N = num_branches();
        std::vector<std::vector<Ser<K>>> yprim;
        for (int a = 0; a < N; ++a)
            yprim.push_back(
                chart_primitives(rec_->curve(), frob_->phi[std::size_t(a)], rec_->basis().order));
        InvariantTable<K> out;
        out.g = g;
        out.n = n;
        out.basis = InvBasis::flat;
        std::vector<int> tup(std::size_t(n), 0);
        for (;;) {
            std::map<std::vector<BIdx>, K> cur = W.c;
            for (int s = 0; s < n; ++s) {
                Correlator<K> shell;
                shell.g = g;
                shell.n = n - s;
                shell.c = std::move(cur);
                cur = rec_->apply_functional(shell, yprim[std::size_t(tup[std::size_t(s)])]);
            }
            auto it = cur.find({});
            if (it != cur.end() && !it->second.is_zero()) {
                std::vector<BIdx> key;
                for (int a : tup) key.push_back(BIdx{a, 0});
                out.c[key] = it->second;
            }
            // next non-decreasing tuple
            int p = n - 1;
            while (p >= 0 && tup[std::size_t(p)] == N - 1) --p;
            if (p < 0) break;
            int v = ++tup[std::size_t(p)];
            for (int q2 = p + 1; q2 < n; ++q2) tup[std::size_t(q2)] = v;
        }
        return convert_from_flat(std::move(out), basis);
    }

    // unit insertion on tables: <tau_0(1) prod tau_k(e_a)> = -sum_j <...tau_{k_j - 1}...>
    // with the unit realized through the decomposition of dy in the primary
    // differentials.  The sign comes from the normalization V_{k+1} = d(V_k/dx):
    // the table identity is the coefficientwise image of
    //     sum_i Res_{P_i} y . omega_{g,n+1} = -sum_j d(omega_{g,n}/dx)_j.
    // Checked over all tuples inside the psi-degree bound.
    bool string_check(int g, int n) {
        const std::vector<K>& lam = frob_->dy_decomposition();
        if (3 * g - 2 + n > kcap_)
            throw truncation_deficit("psi-power cap too small for the string check");
        InvariantTable<K> big = ancestors(g, n + 1, InvBasis::flat);
        InvariantTable<K> small = ancestors(g, n, InvBasis::flat);
        int N = num_branches();
        int kb = 3 * g - 2 + n;
        std::vector<BIdx> t(std::size_t(n), BIdx{0, 0});
        for (;;) {
            bool sorted = true;
            for (int s = 0; s + 1 < n; ++s)
                if (t[std::size_t(s + 1)] < t[std::size_t(s)]) sorted = false;
            if (sorted) {
                K lhs(0);
                for (int a = 0; a < N; ++a) {
                    std::vector<BIdx> key = t;
                    key.push_back(BIdx{a, 0});
                    lhs += lam[std::size_t(a)] * big.coeff(key);
                }
                K rhs(0);
                for (int s = 0; s < n; ++s) {
                    if (t[std::size_t(s)].k == 0) continue;
                    std::vector<BIdx> key = t;
                    --key[std::size_t(s)].k;
                    rhs -= small.coeff(key);
                }
                if (!(lhs == rhs)) return false;
            }
            // next tuple over (branch, k <= kb)
            int p = n - 1;
            while (p >= 0) {
                BIdx& s = t[std::size_t(p)];
                if (s.k < kb) {
                    ++s.k;
                    break;
                }
                if (s.i < N - 1) {
                    ++s.i;
                    s.k = 0;
                    break;
                }
                s = BIdx{0, 0};
                --p;
            }
            if (p < 0) break;
        }
        return true;
    }

  private:
    int num_branches() const { return rec_->curve().num_branches(); }
    std::size_t idx(int i, int k) const { return std::size_t(i * (kcap_ + 1) + k); }

    // slotwise linear map M[(new)][(old)] on a symmetric sorted-key tensor
    std::map<std::vector<BIdx>, K> map_slots(const std::map<std::vector<BIdx>, K>& src, int n,
                                             const Mat<K>& M, const char* msg) const {
        int N = num_branches();
        std::map<std::vector<BIdx>, K> cur = detail::ordered_expand(src);
        for (int slot = 0; slot < n; ++slot) {
            std::map<std::vector<BIdx>, K> nxt;
            for (auto& [T, cT] : cur) {
                if (cT.is_zero()) continue;
                std::size_t old = idx(T[std::size_t(slot)].i, T[std::size_t(slot)].k);
                for (int i = 0; i < N; ++i)
                    for (int k = 0; k <= kcap_; ++k) {
                        const K& m = M[idx(i, k)][old];
                        if (m.is_zero()) continue;
                        std::vector<BIdx> t = T;
                        t[std::size_t(slot)] = BIdx{i, k};
                        nxt[t] += cT * m;
                    }
            }
            cur = std::move(nxt);
        }
        return detail::canonicalize(cur, msg);
    }

    // canonical (i,k) -> flat (alpha,k) slot matrix: Psi^i_alpha
    Mat<K> psi_slot() const {
        int N = num_branches();
        std::size_t dim = std::size_t(N * (kcap_ + 1));
        Mat<K> M(dim, std::vector<K>(dim, K(0)));
        for (int a = 0; a < N; ++a)
            for (int i = 0; i < N; ++i)
                for (int k = 0; k <= kcap_; ++k)
                    M[idx(a, k)][idx(i, k)] = frob_->psi[std::size_t(i)][std::size_t(a)];
        return M;
    }
    Mat<K> eta_slot() const {
        int N = num_branches();
        std::size_t dim = std::size_t(N * (kcap_ + 1));
        Mat<K> M(dim, std::vector<K>(dim, K(0)));
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                for (int k = 0; k <= kcap_; ++k)
                    M[idx(a, k)][idx(b, k)] = frob_->eta_inv[std::size_t(b)][std::size_t(a)];
        return M;
    }

    InvariantTable<K> convert(int g, int n, InvBasis basis, std::map<std::vector<BIdx>, K> canon,
                              bool amb) {
        InvariantTable<K> out;
        out.g = g;
        out.n = n;
        out.basis = basis;
        out.ambiguous = amb;
        if (basis == InvBasis::canonical) {
            out.c = std::move(canon);
            return out;
        }
        out.c = map_slots(canon, n, psi_slot(), "flat table lost symmetry");
        if (basis == InvBasis::dual)
            out.c = map_slots(out.c, n, eta_slot(), "dual table lost symmetry");
        return out;
    }

    InvariantTable<K> convert_from_flat(InvariantTable<K> flat, InvBasis basis) {
        if (basis == InvBasis::flat) return flat;
        InvariantTable<K> out;
        out.g = flat.g;
        out.n = flat.n;
        out.basis = basis;
        out.ambiguous = flat.ambiguous;
        if (basis == InvBasis::dual) {
            out.c = map_slots(flat.c, flat.n, eta_slot(), "dual table lost symmetry");
            return out;
        }
        // invert the Psi contraction
        int N = num_branches();
        Mat<K> P(std::size_t(N), std::vector<K>(std::size_t(N), K(0)));
        for (int a = 0; a < N; ++a)
            for (int i = 0; i < N; ++i) P[std::size_t(a)][std::size_t(i)] = frob_->psi[std::size_t(i)][std::size_t(a)];
        Mat<K> Pinv = mat_inverse(P);
        std::size_t dim = std::size_t(N * (kcap_ + 1));
        Mat<K> M(dim, std::vector<K>(dim, K(0)));
        for (int i = 0; i < N; ++i)
            for (int a = 0; a < N; ++a)
                for (int k = 0; k <= kcap_; ++k)
                    M[idx(i, k)][idx(a, k)] = Pinv[std::size_t(i)][std::size_t(a)];
        out.c = map_slots(flat.c, flat.n, M, "canonical table lost symmetry");
        return out;
    }

    Recursion<K>* rec_;
    const FrobeniusPoint<K>* frob_;
    int kcap_;
    bool ambiguous_ = false;
    Mat<K> pv_, pd_;  // [(contour, weight power)][(branch, psi power)]
    Mat<K> tw_;       // solved weights: [(contour, power)][(slot i, k)]
    Mat<K> tdxi_;     // slot functionals applied to the dxi realizations
};

}

#endif
