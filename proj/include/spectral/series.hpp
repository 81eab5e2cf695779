#ifndef SPECTRAL_SERIES_HPP
#define SPECTRAL_SERIES_HPP

#include <algorithm>
#include <vector>

#include "poly.hpp"

namespace spectral {

// Truncated Laurent series: coefficients for exponents in [lo, hi) are stored,
// exponents below lo are exactly zero, exponents >= hi are unknown.  Every
// operation tracks the resulting guaranteed window; consumers asking beyond it
// get a truncation_deficit, never silent zero-padding.  `ram` marks exponents
// counted in units of 1/ram (used only at Puiseux pole charts; arithmetic
// requires matching ram).
template <class K>
class Ser {
  public:
    Ser() : lo_(0), hi_(0) {}
    Ser(int lo, int hi, std::vector<K> c, int ram = 1)
        : lo_(lo), hi_(hi), c_(std::move(c)), ram_(ram) {
        if (hi_ < lo_ || c_.size() != std::size_t(hi_ - lo_))
            throw internal_consistency_error("series window mismatch");
    }

    static Ser zero_to(int hi, int ram = 1) { return Ser(hi, hi, {}, ram); }
    static Ser monomial(int e, const K& coef, int hi, int ram = 1) {
        if (e >= hi) throw internal_consistency_error("monomial beyond window");
        std::vector<K> c(hi - e, K(0));
        c[0] = coef;
        return Ser(e, hi, std::move(c), ram);
    }
    static Ser constant(const K& coef, int hi, int ram = 1) {
        return monomial(0, coef, hi, ram);
    }

    int lo() const { return lo_; }
    int hi() const { return hi_; }
    int ram() const { return ram_; }
    void set_ram(int r) { ram_ = r; }

    K coeff(int e) const {
        if (e < lo_) return K(0);
        if (e >= hi_)
            throw truncation_deficit("coefficient " + std::to_string(e) +
                                     " requested, window ends at " + std::to_string(hi_));
        return c_[e - lo_];
    }

    bool known_zero() const {
        for (const K& x : c_)
            if (!x.is_zero()) return false;
        return true;
    }

    // Smallest exponent with nonzero coefficient; hi() if none in window.
    int valuation() const {
        for (int e = lo_; e < hi_; ++e)
            if (!c_[e - lo_].is_zero()) return e;
        return hi_;
    }

    Ser truncated(int new_hi) const {
        if (new_hi > hi_) throw truncation_deficit("cannot extend series window");
        int nl = std::min(lo_, new_hi);
        return Ser(nl, new_hi, std::vector<K>(c_.begin(), c_.begin() + (new_hi - nl)), ram_);
    }

    Ser shifted(int k) const {
        Ser r = *this;
        r.lo_ += k;
        r.hi_ += k;
        return r;
    }

    friend Ser operator+(const Ser& a, const Ser& b) {
        a.check_ram(b);
        int hi = std::min(a.hi_, b.hi_);
        int lo = std::min({a.lo_, b.lo_, hi});
        std::vector<K> c(hi - lo, K(0));
        for (int e = lo; e < hi; ++e) c[e - lo] = a.coeff_window(e) + b.coeff_window(e);
        return Ser(lo, hi, std::move(c), a.ram_);
    }
    friend Ser operator-(const Ser& a, const Ser& b) { return a + (-b); }
    Ser operator-() const {
        Ser r = *this;
        for (K& x : r.c_) x = -x;
        return r;
    }
    friend Ser operator*(const K& s, const Ser& a) {
        Ser r = a;
        for (K& x : r.c_) x = s * x;
        return r;
    }
    friend Ser operator*(const Ser& a, const Ser& b) {
        a.check_ram(b);
        int va = a.valuation(), vb = b.valuation();
        int lo = va + vb;
        int hi = std::min(va + b.hi_, vb + a.hi_);
        if (hi <= lo) return Ser(hi, hi, {}, a.ram_);
        std::vector<K> c(hi - lo, K(0));
        for (int i = va; i < a.hi_; ++i) {
            if (i >= hi - vb) break;
            const K& ai = a.coeff_in(i);
            if (ai.is_zero()) continue;
            for (int j = vb; j < b.hi_ && i + j < hi; ++j) {
                const K& bj = b.coeff_in(j);
                if (bj.is_zero()) continue;
                c[i + j - lo] += ai * bj;
            }
        }
        return Ser(lo, hi, std::move(c), a.ram_);
    }
    Ser& operator+=(const Ser& b) { return *this = *this + b; }
    Ser& operator-=(const Ser& b) { return *this = *this - b; }
    Ser& operator*=(const Ser& b) { return *this = *this * b; }

    Ser inv() const {
        int v = valuation();
        if (v == hi_) throw error_base("inversion of series with no visible term");
        const K& lead = coeff_in(v);
        if (!Ring<K>::is_unit(lead)) throw error_base("series leading coefficient not a unit");
        int n = hi_ - v;  // relative window length
        K li = K(1) / lead;
        std::vector<K> g(n, K(0));
        g[0] = li;
        for (int k = 1; k < n; ++k) {
            K acc(0);
            for (int j = 1; j <= k; ++j) {
                K fj = (v + j < hi_) ? coeff_in(v + j) : K(0);
                if (fj.is_zero()) continue;
                acc += fj * g[k - j];
            }
            g[k] = -(li * acc);
        }
        return Ser(-v, -v + n, std::move(g), ram_);
    }

    Ser derivative() const {
        // d/ds of sum c_e s^e; exponents in 1/ram units are differentiated as
        // rational exponents e/ram (only used where ram divides out later).
        std::vector<K> c;
        int lo = lo_ - 1, hi = hi_ - 1;
        c.resize(hi - lo, K(0));
        for (int e = lo_; e < hi_; ++e) c[e - 1 - lo] = K(long(e)) * c_[e - lo_];
        return Ser(lo, hi, std::move(c), ram_);
    }

    // Antiderivative with zero constant; the s^{-1} coefficient must vanish
    // (callers needing the log coefficient use coeff(-1) beforehand).
    Ser antiderivative() const {
        if (!coeff_window(-1).is_zero())
            throw error_base("antiderivative of series with nonzero residue");
        int lo = lo_ + 1, hi = hi_ + 1;
        std::vector<K> c(hi - lo, K(0));
        for (int e = lo_; e < hi_; ++e) {
            if (e == -1) continue;
            c[e + 1 - lo] = c_[e - lo_] / K(long(e + 1));
        }
        return Ser(lo, hi, std::move(c), ram_);
    }

    K residue() const {
        if (-1 < lo_) return K(0);
        return coeff(-1);
    }

    // Composition f(g) for inner series g with valuation >= 1; negative
    // exponents of f go through the inverse of g.  The window of the result
    // follows from the usual accounting (f-tail at hi_f * m, g-tail at
    // (e-1)*m + hi_g minimized over contributing exponents), tracked
    // automatically by the windowed + and *.
    friend Ser compose(const Ser& f, const Ser& g) {
        int m = g.valuation();
        if (m < 1) throw error_base("composition needs positive inner valuation");
        Ser r = Ser::zero_to(f.hi_ * m, g.ram_);
        {
            Ser pw = Ser::constant(K(1), f.hi_ * m, g.ram_);
            for (int e = 0; e < f.hi_; ++e) {
                if (e >= f.lo_) {
                    const K& fe = f.c_[e - f.lo_];
                    if (!fe.is_zero()) r += fe * pw;
                }
                if (e + 1 < f.hi_) pw = pw * g;
            }
        }
        if (f.lo_ < 0) {
            Ser gi = g.inv();
            Ser pw = gi;
            for (int e = -1; e >= f.lo_; --e) {
                const K& fe = f.c_[e - f.lo_];
                if (!fe.is_zero()) r += fe * pw;
                if (e - 1 >= f.lo_) pw = pw * gi;
            }
        }
        return r;
    }

    // (leading-1 series)^(p/q) by the binomial expansion; requires valuation 0
    // and leading coefficient 1.
    Ser pow_rat(const Rat& q) const {
        if (valuation() != 0 || !(coeff_in(0) == K(1)))
            throw error_base("pow_rat needs a 1 + O(s) series");
        Ser s = *this - Ser::constant(K(1), hi_, ram_);
        int sv = std::max(s.valuation(), 1);
        Ser r = Ser::constant(K(1), hi_, ram_);
        Ser p = Ser::constant(K(1), hi_, ram_);
        Rat binom = 1;
        for (int k = 1; k * sv < hi_; ++k) {
            p = p * s;
            binom *= (q - Rat(k - 1)) / Rat(k);
            r += Ring<K>::from_scalar(Scalar(binom)) * p;
            if (p.known_zero()) break;
        }
        return r.truncated(hi_);
    }

    // sqrt with even valuation; branch fixed by Ring<K>::sqrt on the leading
    // coefficient (deterministic via the shared tower context).
    Ser sqrt(TowerCtx& ctx) const {
        int v = valuation();
        if (v == hi_) throw error_base("sqrt of series with no visible term");
        if (v % 2 != 0) throw degeneracy_error("sqrt of series with odd valuation");
        const K& lead = coeff_in(v);
        K rl = Ring<K>::sqrt(ctx, lead);
        Ser unitpart = (K(1) / lead) * shifted(-v);
        Ser rt = unitpart.pow_rat(Rat(1, 2));
        return (rl * rt).shifted(v / 2);
    }

    // f(-s) with an extra factor (-1) when the series represents the dzeta
    // coefficient of a differential (pullback under the involution).
    Ser pullback_sigma(bool differential) const {
        Ser r = *this;
        for (int e = lo_; e < hi_; ++e) {
            bool neg = (e % 2 != 0);
            if (differential) neg = !neg;
            if (neg) r.c_[e - lo_] = -r.c_[e - lo_];
        }
        return r;
    }

  private:
    const K& coeff_in(int e) const { return c_[e - lo_]; }
    K coeff_window(int e) const {
        if (e < lo_ || e >= hi_) return K(0);
        return c_[e - lo_];
    }
    void check_ram(const Ser& b) const {
        if (ram_ != b.ram_) throw internal_consistency_error("mixed ramification indices");
    }
    int lo_, hi_;
    std::vector<K> c_;
    int ram_ = 1;
};

// Solve F(w, s) = 0 for w(s) with w(0) = seed by Newton iteration; F is given
// as a polynomial in w whose coefficients are series in s.
template <class K>
Ser<K> series_solve(const std::vector<Ser<K>>& F, const K& seed, int order) {
    if (F.empty()) throw error_base("series_solve: empty equation");
    int hi = order;
    for (const auto& f : F) hi = std::min(hi, f.hi());
    if (hi < order)
        throw truncation_deficit("series_solve inputs shorter than requested order");
    auto eval_at = [&](const std::vector<Ser<K>>& P, const Ser<K>& w) {
        Ser<K> r = Ser<K>::zero_to(hi);
        for (auto it = P.rbegin(); it != P.rend(); ++it) r = r * w + it->truncated(hi);
        return r;
    };
    // F(seed, 0) must vanish and dF/dw(seed, 0) must be a unit
    K f0(0), fp0(0), sp(1);
    for (std::size_t j = 0; j < F.size(); ++j) {
        K cj = (F[j].lo() <= 0 && F[j].hi() > 0) ? F[j].coeff(0) : K(0);
        f0 += cj * sp;
        if (j + 1 < F.size()) {
            K cj1 = (F[j + 1].lo() <= 0 && F[j + 1].hi() > 0) ? F[j + 1].coeff(0) : K(0);
            fp0 += K(long(j + 1)) * cj1 * sp;
        }
        sp = sp * seed;
    }
    if (!f0.is_zero()) throw error_base("series_solve: seed is not a root at s = 0");
    if (!Ring<K>::is_unit(fp0)) throw singular_jacobian_error("series_solve: dF/dw not a unit");
    std::vector<Ser<K>> Fp;
    for (std::size_t j = 1; j < F.size(); ++j)
        Fp.push_back(K(long(j)) * F[j].truncated(hi));
    Ser<K> w = Ser<K>::constant(seed, hi);
    int steps = 1;
    while ((1 << steps) < hi + 1) ++steps;
    for (int i = 0; i <= steps; ++i) {
        Ser<K> fw = eval_at(F, w);
        Ser<K> fpw = eval_at(Fp, w);
        w = w - fw * fpw.inv();
        if (w.hi() > hi) w = w.truncated(hi);
    }
    Ser<K> resid = eval_at(F, w);
    if (!resid.known_zero())
        throw internal_consistency_error("series_solve: Newton failed to converge");
    return w;
}

// Compositional inverse of g (valuation exactly 1): t(zeta) with g(t) = zeta.
template <class K>
Ser<K> series_invert(const Ser<K>& g, int order) {
    if (g.valuation() != 1) throw error_base("series inversion needs valuation 1");
    // solve F(w, s) = g(w) - s = 0
    int hi = std::min(order, g.hi());
    std::vector<Ser<K>> F;
    for (int j = 0; j < g.hi(); ++j)
        F.push_back(Ser<K>::constant(j >= g.lo() ? g.coeff(j) : K(0), hi));
    F[0] = F[0] - Ser<K>::monomial(1, K(1), hi);
    return series_solve(F, K(0), hi);
}

}

#endif
