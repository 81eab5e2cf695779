#ifndef SPECTRAL_RECURSION_HPP
#define SPECTRAL_RECURSION_HPP

#include <algorithm>
#include <map>
#include <set>

#include "basis.hpp"
#include "linalg.hpp"

namespace spectral {

// Symmetric coefficient tensor of omega_{g,n} on a principal-part basis
// (dxi by default, V after change_basis_to_V): map from sorted index tuples
// to the common value of the full tensor on any ordering of the tuple.
template <class K>
struct Correlator {
    int g = 0;
    int n = 0;
    std::map<std::vector<BIdx>, K> c;

    K coeff(std::vector<BIdx> t) const {
        std::sort(t.begin(), t.end());
        auto it = c.find(t);
        return it == c.end() ? K(0) : it->second;
    }
};

namespace detail {

inline std::vector<BIdx> erase_at(const std::vector<BIdx>& t, std::size_t a) {
    std::vector<BIdx> r = t;
    r.erase(r.begin() + long(a));
    return r;
}
inline std::vector<BIdx> erase_at2(const std::vector<BIdx>& t, std::size_t a, std::size_t b) {
    std::vector<BIdx> r;
    for (std::size_t p = 0; p < t.size(); ++p)
        if (p != a && p != b) r.push_back(t[p]);
    return r;
}

// number of position subsets of the sorted merge of (a, b) whose value
// multiset equals a: product over values of binomial(m_merge, m_a)
inline long interleavings(const std::vector<BIdx>& a, const std::vector<BIdx>& b) {
    std::map<BIdx, long> ma, mm;
    for (const BIdx& s : a) ++ma[s], ++mm[s];
    for (const BIdx& s : b) ++mm[s];
    long r = 1;
    for (auto& [v, tot] : mm) {
        long pick = ma.count(v) ? ma[v] : 0;
        long binom = 1;
        for (long j = 0; j < pick; ++j) binom = binom * (tot - j) / (j + 1);
        r *= binom;
    }
    return r;
}

// full ordered tensor from the sorted-key representation
template <class K>
std::map<std::vector<BIdx>, K> ordered_expand(const std::map<std::vector<BIdx>, K>& c) {
    std::map<std::vector<BIdx>, K> cur;
    for (auto& [T, cT] : c) {
        std::vector<BIdx> t = T;
        do cur[t] = cT;
        while (std::next_permutation(t.begin(), t.end()));
    }
    return cur;
}

// collapse an ordered tensor back to sorted keys, asserting S_n symmetry
template <class K>
std::map<std::vector<BIdx>, K> canonicalize(const std::map<std::vector<BIdx>, K>& cur,
                                            const char* msg) {
    std::map<std::vector<BIdx>, K> out;
    for (auto& [T, cT] : cur) {
        if (cT.is_zero()) continue;
        std::vector<BIdx> t = T;
        std::sort(t.begin(), t.end());
        auto it = out.find(t);
        if (it == out.end()) out[t] = cT;
        else if (!(it->second == cT)) throw internal_consistency_error(msg);
    }
    return out;
}

}

// Topological recursion on the analyzed curve.  Correlators are produced as
// dxi-coefficient tensors; the residue extraction uses only the singular part
// of the recursion kernel at the matching chart, so each coefficient is a
// single univariate residue  Res_zeta[-2 zeta^{2k+1} invD_i(zeta) * bracket].
template <class K>
class Recursion {
  public:
    Recursion(const Curve<K>& C, int kcap, int order)
        : curve_(&C), kcap_(kcap), basis_(make_basis(C, kcap, order)) {
        for (int i = 0; i < C.num_branches(); ++i) {
            Ser<K> dyc = C.expand_diff_at_branch(C.dy, i, order);
            dyc_.push_back(dyc);
            // D = 2 zeta (y(zeta) - y(-zeta)) = 4 sum_{e even} d_e zeta^{e+2}/(e+1)
            std::vector<K> dcoef(std::size_t(dyc.hi() + 2), K(0));
            for (int e = 0; e < dyc.hi(); ++e) {
                if (e % 2 != 0) continue;
                dcoef[std::size_t(e + 2)] = K(4) * dyc.coeff(e) / K(long(e + 1));
            }
            Ser<K> D(0, dyc.hi() + 2, std::move(dcoef));
            inv_d_.push_back(D.inv());
            omega02_diag_.push_back(make_omega02_diag(i, order));
        }
    }

    const Curve<K>& curve() const { return *curve_; }
    const DiffBasis<K>& basis() const { return basis_; }
    const Ser<K>& dy_chart(int i) const { return dyc_[std::size_t(i)]; }

    // omega_{0,2}(p, sigma p) expanded at branch i, as the dzeta^2 coefficient:
    // -W'(z)W'(-z)/(W(z)-W(-z))^2 including the (2 zeta)^{-2} double pole.
    const Ser<K>& omega02_diag(int i) const { return omega02_diag_[std::size_t(i)]; }

    const Correlator<K>& omega(int g, int n) {
        if (2 * g - 2 + n <= 0)
            throw error_base("unstable (g,n); use ydx / Bergman accessors");
        auto key = std::make_pair(g, n);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Correlator<K> W = compute(g, n);
        return memo_.emplace(key, std::move(W)).first->second;
    }

    // closed formula sum_i Res_{P_i} B(p1,.)B(p2,.)B(p3,.)/(dx dy)
    Correlator<K> omega03_direct() {
        Correlator<K> W;
        W.g = 0;
        W.n = 3;
        for (int i = 0; i < curve_->num_branches(); ++i) {
            // dx = zeta dzeta exactly in the Airy chart
            Ser<K> m = (Ser<K>::monomial(1, K(1), dyc_[std::size_t(i)].hi()) *
                        dyc_[std::size_t(i)])
                           .inv();
            for (int k1 = 0; k1 <= kcap_; ++k1)
                for (int k2 = k1; k2 <= kcap_; ++k2)
                    for (int k3 = k2; k3 <= kcap_; ++k3) {
                        int e = -(2 * (k1 + k2 + k3)) - 1;
                        if (e < m.lo()) continue;
                        K val = K(long((2 * k1 + 1) * (2 * k2 + 1) * (2 * k3 + 1))) *
                                m.coeff(e);
                        if (val.is_zero()) continue;
                        std::vector<BIdx> t{{i, k1}, {i, k2}, {i, k3}};
                        W.c[t] = val;
                    }
        }
        return W;
    }

    // Sum_i Res_{P_i} f_i(zeta) * (slot expansion); applied to one slot of a
    // correlator, producing the rank-(n-1) tensor.
    std::map<std::vector<BIdx>, K> apply_functional(const Correlator<K>& W,
                                                    const std::vector<Ser<K>>& f) const {
        // lambda(s) = sum_i Res(f_i * E_i[s])
        std::map<BIdx, K> lam;
        std::map<std::vector<BIdx>, K> out;
        for (auto& [T, cT] : W.c) {
            for (std::size_t a = 0; a < T.size(); ++a) {
                if (a > 0 && T[a] == T[a - 1]) continue;
                auto it = lam.find(T[a]);
                if (it == lam.end()) {
                    K v(0);
                    for (int i = 0; i < curve_->num_branches(); ++i)
                        v += (f[std::size_t(i)] * basis_.expansion(i, T[a])).coeff(-1);
                    it = lam.emplace(T[a], v).first;
                }
                if (it->second.is_zero()) continue;
                out[detail::erase_at(T, a)] += cT * it->second;
            }
        }
        return out;
    }

    // exact triangular change from the dxi tensor to the V tensor
    Correlator<K> change_basis_to_V(const Correlator<K>& W) const {
        int N = curve_->num_branches();
        int dim = N * (kcap_ + 1);
        auto flat = [&](const BIdx& s) { return s.i * (kcap_ + 1) + s.k; };
        Mat<K> A(std::size_t(dim), std::vector<K>(std::size_t(dim), K(0)));
        for (int i = 0; i < N; ++i)
            for (int k = 0; k <= kcap_; ++k)
                for (int j = 0; j < N; ++j)
                    for (int l = 0; l <= kcap_; ++l) {
                        const Ser<K>& e = basis_.v_expansion(i, BIdx{j, l});
                        int want = -(2 * k + 2);
                        K val = (want >= e.lo()) ? e.coeff(want) : K(0);
                        A[std::size_t(flat(BIdx{i, k}))][std::size_t(flat(BIdx{j, l}))] = val;
                        if (k > l && !val.is_zero())
                            throw internal_consistency_error(
                                "V basis change is not triangular");
                    }
        Mat<K> Ainv = mat_inverse(A);
        // apply Ainv to every slot of the full (ordered) tensor
        std::map<std::vector<BIdx>, K> cur = detail::ordered_expand(W.c);
        for (int slot = 0; slot < W.n; ++slot) {
            std::map<std::vector<BIdx>, K> nxt;
            for (auto& [T, cT] : cur) {
                if (cT.is_zero()) continue;
                for (int j = 0; j < N; ++j)
                    for (int l = 0; l <= kcap_; ++l) {
                        BIdx s{j, l};
                        const K& m = Ainv[std::size_t(flat(s))][std::size_t(flat(T[std::size_t(slot)]))];
                        if (m.is_zero()) continue;
                        std::vector<BIdx> t = T;
                        t[std::size_t(slot)] = s;
                        nxt[t] += cT * m;
                    }
            }
            cur = std::move(nxt);
        }
        Correlator<K> out;
        out.g = W.g;
        out.n = W.n;
        out.c = detail::canonicalize(cur, "V tensor lost its symmetry");
        return out;
    }

    // Checks the string and dilaton identities relating omega_{g,n+1} to
    // omega_{g,n}:
    //   sum_i Res_{P_i} y . omega_{g,n+1}           = -sum_j d(omega_{g,n}/dx)_j
    //   sum_i Res_{P_i} (Phi - x y) . omega_{g,n+1} =
    //       (2g-2+n) omega_{g,n} + sum_j d(x omega_{g,n}/dx)_j
    // with Phi a local primitive of y dx.  Both right-hand sides stay in the
    // span of the dxi basis (the slot operators are exact differentials with
    // poles only at branch points), so the comparison is coefficientwise.
    bool string_dilaton_check(int g, int n) {
        if (3 * g - 2 + n > kcap_)
            throw truncation_deficit("basis k-range too small for string/dilaton check");
        int N = curve_->num_branches();
        std::vector<Ser<K>> ys, fstr, fdil;
        for (int i = 0; i < N; ++i) {
            const Ser<K>& dyc = dyc_[std::size_t(i)];
            Ser<K> y = dyc.antiderivative();
            Ser<K> zeta = Ser<K>::monomial(1, K(1), dyc.hi());
            Ser<K> x = Ser<K>::constant(curve_->branches[std::size_t(i)].u, dyc.hi()) +
                       Ser<K>::monomial(2, K(1) / K(2), dyc.hi());
            Ser<K> phi = (y * zeta).antiderivative();
            fstr.push_back(y);
            fdil.push_back(phi - x * y);
        }
        const Correlator<K>& W = omega(g, n);
        const Correlator<K>& Wn = omega(g, n + 1);

        auto slot_op = [&](bool with_x) {
            // matrix of dxi_{i,k} -> d(dxi/dx) resp. d(x dxi/dx) on the basis
            int dim = N * (kcap_ + 1);
            Mat<K> D(std::size_t(dim), std::vector<K>(std::size_t(dim), K(0)));
            for (int c = 0; c < N; ++c)
                for (int j = 0; j < N; ++j)
                    for (int k = 0; k <= kcap_; ++k) {
                        Ser<K> e = basis_.expansion(c, BIdx{j, k}).shifted(-1);
                        if (with_x) {
                            Ser<K> x = Ser<K>::constant(curve_->branches[std::size_t(c)].u,
                                                        e.hi() - 2) +
                                       Ser<K>::monomial(2, K(1) / K(2), e.hi() - 2);
                            e = e.truncated(e.hi() - 2) * x;
                        }
                        Ser<K> d = e.derivative();
                        for (int k0 = 0; k0 <= kcap_; ++k0) {
                            int want = -(2 * k0 + 2);
                            if (want < d.lo()) continue;
                            D[std::size_t(c * (kcap_ + 1) + k0)]
                             [std::size_t(j * (kcap_ + 1) + k)] = d.coeff(want);
                        }
                    }
            return D;
        };
        auto apply_slots = [&](const Mat<K>& D) {
            std::map<std::vector<BIdx>, K> out;
            for (auto& [T, cT] : detail::ordered_expand(W.c))
                for (std::size_t a = 0; a < T.size(); ++a)
                    for (int c = 0; c < N; ++c)
                        for (int k0 = 0; k0 <= kcap_; ++k0) {
                            const K& m = D[std::size_t(c * (kcap_ + 1) + k0)][std::size_t(
                                T[a].i * (kcap_ + 1) + T[a].k)];
                            if (m.is_zero()) continue;
                            std::vector<BIdx> t = T;
                            t[a] = BIdx{c, k0};
                            out[t] += cT * m;
                        }
            return detail::canonicalize(out, "slot derivative lost symmetry");
        };
        auto clean = [](std::map<std::vector<BIdx>, K> m) {
            for (auto it = m.begin(); it != m.end();)
                it = it->second.is_zero() ? m.erase(it) : std::next(it);
            return m;
        };

        std::map<std::vector<BIdx>, K> rhs_str = apply_slots(slot_op(false));
        for (auto& [T, cT] : rhs_str) cT = -cT;
        if (!(clean(apply_functional(Wn, fstr)) == rhs_str)) return false;

        std::map<std::vector<BIdx>, K> rhs_dil = apply_slots(slot_op(true));
        K euler(long(2 * g - 2 + n));
        for (auto& [T, cT] : W.c) rhs_dil[T] += euler * cT;
        return clean(apply_functional(Wn, fdil)) == clean(std::move(rhs_dil));
    }

    int kcap() const { return kcap_; }

  private:
    Ser<K> make_omega02_diag(int i, int order) const {
        const auto& b = curve_->branches[std::size_t(i)];
        Mobius<K> m = curve_->mobius_for(b.loc, b.loc);
        Ser<K> W = curve_->w_of_zeta(i, m, order);
        Ser<K> u = W - W.pullback_sigma(false);
        Ser<K> Wd = W.derivative();
        return -(Wd * Wd.pullback_sigma(false) * (u * u).inv());
    }

    using Bracket = std::map<std::vector<BIdx>, Ser<K>>;

    void bracket_add(Bracket& br, std::vector<BIdx> key, const Ser<K>& s) {
        std::sort(key.begin(), key.end());
        auto it = br.find(key);
        if (it == br.end()) br.emplace(std::move(key), s);
        else it->second = it->second + s;
    }

    // stable factor stream: (first-slot index, remaining tuple, coefficient)
    struct Factor {
        BIdx s;
        std::vector<BIdx> rest;
        K c;
    };
    std::vector<Factor> factor_stream(int g, int n, int i) {
        std::vector<Factor> out;
        if (g == 0 && n == 2) {
            // external omega_{0,2} slot: B(zeta, p) principal-part reading
            // at chart i gives (2k+1) zeta^{2k} on the index (i,k)
            for (int k = 0; k <= kcap_; ++k)
                out.push_back({BIdx{i, k}, {BIdx{i, k}}, K(1)});
            return out;
        }
        const Correlator<K>& W = omega(g, n);
        for (auto& [T, cT] : W.c)
            for (std::size_t a = 0; a < T.size(); ++a) {
                if (a > 0 && T[a] == T[a - 1]) continue;
                out.push_back({T[a], detail::erase_at(T, a), cT});
            }
        return out;
    }
    Ser<K> factor_series(int g, int n, int i, const BIdx& s) const {
        if (g == 0 && n == 2)
            return Ser<K>::monomial(2 * s.k, K(long(2 * s.k + 1)), basis_.order);
        return basis_.expansion(i, s);
    }

    Correlator<K> compute(int g, int n) {
        int n0 = n - 1;
        int kcap_out = 3 * g - 3 + n;
        if (kcap_out > kcap_)
            throw truncation_deficit("basis k-range too small for requested (g,n)");
        Correlator<K> W;
        W.g = g;
        W.n = n;
        for (int i = 0; i < curve_->num_branches(); ++i) {
            Bracket br;
            // genus reduction: omega_{g-1, n0+2}(zeta, sigma zeta, rest)
            if (g >= 1) {
                if (g == 1 && n0 == 0) {
                    bracket_add(br, {}, omega02_diag_[std::size_t(i)]);
                } else if (g == 1) {
                    // omega_{0, n0+2} with n0 >= 1 is stable
                    genus_term(br, i, 0, n0 + 2);
                } else {
                    genus_term(br, i, g - 1, n0 + 2);
                }
            }
            // splits omega_{g1,1+n1}(zeta, I1) omega_{g2,1+n2}(sigma zeta, I2)
            for (int g1 = 0; g1 <= g; ++g1)
                for (int n1 = 0; n1 <= n0; ++n1) {
                    int g2 = g - g1, n2 = n0 - n1;
                    if ((g1 == 0 && n1 == 0) || (g2 == 0 && n2 == 0)) continue;
                    auto f1 = factor_stream(g1, n1 + 1, i);
                    auto f2 = factor_stream(g2, n2 + 1, i);
                    for (const Factor& a : f1) {
                        Ser<K> sa = factor_series(g1, n1 + 1, i, a.s);
                        for (const Factor& b : f2) {
                            Ser<K> sb =
                                factor_series(g2, n2 + 1, i, b.s).pullback_sigma(true);
                            std::vector<BIdx> key = a.rest;
                            key.insert(key.end(), b.rest.begin(), b.rest.end());
                            K w = a.c * b.c * K(detail::interleavings(a.rest, b.rest));
                            bracket_add(br, std::move(key), w * (sa * sb));
                        }
                    }
                }
            // extract: coefficient at (i, k0) is the zeta^{-2k0-2} coefficient
            // of M = -2 invD * bracket
            for (auto& [R, s] : br) {
                Ser<K> M = K(-2) * (inv_d_[std::size_t(i)] * s);
                for (int e = M.lo(); e <= -2; ++e) {
                    K val = M.coeff(e);
                    if (val.is_zero()) continue;
                    if (e % 2 != 0)
                        throw internal_consistency_error(
                            "odd principal part in recursion output");
                    int k0 = (-e - 2) / 2;
                    if (k0 > kcap_out)
                        throw internal_consistency_error(
                            "correlator exceeds the psi-degree bound");
                    std::vector<BIdx> t = R;
                    t.push_back(BIdx{i, k0});
                    std::sort(t.begin(), t.end());
                    auto it = W.c.find(t);
                    if (it == W.c.end()) W.c[t] = val;
                    else if (!(it->second == val))
                        throw internal_consistency_error(
                            "recursion output is not symmetric");
                }
            }
        }
        return W;
    }

    void genus_term(Bracket& br, int i, int gp, int np) {
        const Correlator<K>& Wp = omega(gp, np);
        for (auto& [T, cT] : Wp.c) {
            std::set<std::pair<BIdx, BIdx>> seen;
            for (std::size_t a = 0; a < T.size(); ++a)
                for (std::size_t b = 0; b < T.size(); ++b) {
                    if (a == b) continue;
                    if (!seen.insert({T[a], T[b]}).second) continue;
                    Ser<K> s = basis_.expansion(i, T[a]) *
                               basis_.expansion(i, T[b]).pullback_sigma(true);
                    bracket_add(br, detail::erase_at2(T, a, b), cT * s);
                }
        }
    }

    const Curve<K>* curve_;
    int kcap_;
    DiffBasis<K> basis_;
    std::vector<Ser<K>> dyc_;
    std::vector<Ser<K>> inv_d_;
    std::vector<Ser<K>> omega02_diag_;
    std::map<std::pair<int, int>, Correlator<K>> memo_;
};

}

#endif
