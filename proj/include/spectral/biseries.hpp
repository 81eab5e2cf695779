#ifndef SPECTRAL_BISERIES_HPP
#define SPECTRAL_BISERIES_HPP

#include "series.hpp"

namespace spectral {

// Truncated bivariate Laurent series with a rectangular window per variable;
// same window semantics as Ser in each variable independently.
template <class K>
class BiSer {
  public:
    BiSer() : lo1_(0), hi1_(0), lo2_(0), hi2_(0) {}
    BiSer(int lo1, int hi1, int lo2, int hi2)
        : lo1_(lo1), hi1_(hi1), lo2_(lo2), hi2_(hi2),
          c_(std::size_t(std::max(0, hi1 - lo1)) * std::size_t(std::max(0, hi2 - lo2)), K(0)) {
        if (hi1 < lo1 || hi2 < lo2)
            throw internal_consistency_error("biseries window mismatch");
    }

    int lo1() const { return lo1_; }
    int hi1() const { return hi1_; }
    int lo2() const { return lo2_; }
    int hi2() const { return hi2_; }

    K& at(int e1, int e2) { return c_[idx(e1, e2)]; }
    const K& at(int e1, int e2) const { return c_[idx(e1, e2)]; }

    K coeff(int e1, int e2) const {
        if (e1 < lo1_ || e2 < lo2_) return K(0);
        if (e1 >= hi1_ || e2 >= hi2_)
            throw truncation_deficit("biseries coefficient outside window");
        return at(e1, e2);
    }
    K coeff_window(int e1, int e2) const {
        if (e1 < lo1_ || e2 < lo2_ || e1 >= hi1_ || e2 >= hi2_) return K(0);
        return at(e1, e2);
    }

    static BiSer outer_product(const Ser<K>& a, const Ser<K>& b) {
        BiSer r(a.lo(), a.hi(), b.lo(), b.hi());
        for (int i = a.lo(); i < a.hi(); ++i) {
            K ai = a.coeff(i);
            if (ai.is_zero()) continue;
            for (int j = b.lo(); j < b.hi(); ++j) r.at(i, j) = ai * b.coeff(j);
        }
        return r;
    }
    // embed a univariate series with the other variable's window given
    static BiSer from_var1(const Ser<K>& a, int hi2) {
        return outer_product(a, Ser<K>::monomial(0, K(1), hi2));
    }
    static BiSer from_var2(const Ser<K>& b, int hi1) {
        return outer_product(Ser<K>::monomial(0, K(1), hi1), b);
    }

    int valuation1() const {
        for (int e1 = lo1_; e1 < hi1_; ++e1)
            for (int e2 = lo2_; e2 < hi2_; ++e2)
                if (!at(e1, e2).is_zero()) return e1;
        return hi1_;
    }
    int valuation2() const {
        for (int e2 = lo2_; e2 < hi2_; ++e2)
            for (int e1 = lo1_; e1 < hi1_; ++e1)
                if (!at(e1, e2).is_zero()) return e2;
        return hi2_;
    }

    bool known_zero() const {
        for (const K& x : c_)
            if (!x.is_zero()) return false;
        return true;
    }

    friend BiSer operator+(const BiSer& a, const BiSer& b) {
        int hi1 = std::min(a.hi1_, b.hi1_), hi2 = std::min(a.hi2_, b.hi2_);
        int lo1 = std::min({a.lo1_, b.lo1_, hi1}), lo2 = std::min({a.lo2_, b.lo2_, hi2});
        BiSer r(lo1, hi1, lo2, hi2);
        for (int e1 = lo1; e1 < hi1; ++e1)
            for (int e2 = lo2; e2 < hi2; ++e2)
                r.at(e1, e2) = a.coeff_window(e1, e2) + b.coeff_window(e1, e2);
        return r;
    }
    friend BiSer operator-(const BiSer& a, const BiSer& b) { return a + (-b); }
    BiSer operator-() const {
        BiSer r = *this;
        for (K& x : r.c_) x = -x;
        return r;
    }
    friend BiSer operator*(const K& s, const BiSer& a) {
        BiSer r = a;
        for (K& x : r.c_) x = s * x;
        return r;
    }
    friend BiSer operator*(const BiSer& a, const BiSer& b) {
        int va1 = a.valuation1(), vb1 = b.valuation1();
        int va2 = a.valuation2(), vb2 = b.valuation2();
        int lo1 = va1 + vb1, hi1 = std::min(va1 + b.hi1_, vb1 + a.hi1_);
        int lo2 = va2 + vb2, hi2 = std::min(va2 + b.hi2_, vb2 + a.hi2_);
        if (hi1 < lo1) { lo1 = hi1; }
        if (hi2 < lo2) { lo2 = hi2; }
        BiSer r(lo1, hi1, lo2, hi2);
        for (int i1 = va1; i1 < a.hi1_ && i1 + vb1 < hi1; ++i1)
            for (int i2 = va2; i2 < a.hi2_ && i2 + vb2 < hi2; ++i2) {
                const K& ac = a.coeff_window(i1, i2);
                if (ac.is_zero()) continue;
                for (int j1 = vb1; j1 < b.hi1_ && i1 + j1 < hi1; ++j1)
                    for (int j2 = vb2; j2 < b.hi2_ && i2 + j2 < hi2; ++j2) {
                        const K& bc = b.coeff_window(j1, j2);
                        if (bc.is_zero()) continue;
                        r.at(i1 + j1, i2 + j2) += ac * bc;
                    }
            }
        return r;
    }
    BiSer& operator+=(const BiSer& b) { return *this = *this + b; }
    BiSer& operator-=(const BiSer& b) { return *this = *this - b; }
    BiSer& operator*=(const BiSer& b) { return *this = *this * b; }

    // Inverse when the (0,0) corner coefficient is a unit and the window
    // starts at (0,0); Neumann series, terminating inside the window.
    BiSer inv() const {
        if (lo1_ != 0 || lo2_ != 0)
            throw error_base("biseries inverse needs windows starting at 0");
        K c0 = coeff_window(0, 0);
        if (!Ring<K>::is_unit(c0)) throw error_base("biseries inverse: corner not a unit");
        K ci = K(1) / c0;
        BiSer s = *this;
        s = ci * s;
        s.at(0, 0) -= K(1);
        s = -s;  // now *this = c0 (1 - s) with s vanishing at the corner
        BiSer r(0, hi1_, 0, hi2_);
        r.at(0, 0) = K(1);
        BiSer p = r;
        int maxk = (hi1_ - 1) + (hi2_ - 1);
        for (int k = 1; k <= maxk; ++k) {
            p = p * s;
            p = p.padded(hi1_, hi2_);
            if (p.known_zero()) break;
            r += p;
        }
        return ci * r.padded(hi1_, hi2_);
    }

    // Inverse computed column by column in var2: writing f = sum_m f_m(z1) z2^m,
    // the inverse columns are g_0 = 1/f_0, g_m = -g_0 * sum_{j>=1} f_j g_{m-j}.
    // Needs lo2 == 0 and an invertible column f_0 (handled by Ser::inv, which
    // also permits a nonzero valuation in z1).
    BiSer inv_cols() const {
        if (lo2_ != 0) throw error_base("inv_cols needs var2 window starting at 0");
        Ser<K> f0 = row_var2(0);
        Ser<K> g0 = f0.inv();
        std::vector<Ser<K>> cols{g0};
        int hi1 = g0.hi(), lo1 = g0.lo();
        for (int m = 1; m < hi2_; ++m) {
            Ser<K> acc = Ser<K>::zero_to(f0.hi() * 4 + 64);
            for (int j = 1; j <= m; ++j) {
                Ser<K> fj = row_var2(j);
                if (fj.known_zero()) continue;
                acc = acc + fj * cols[m - j];
            }
            Ser<K> gm = -(g0 * acc);
            hi1 = std::min(hi1, gm.hi());
            lo1 = std::min(lo1, gm.lo());
            cols.push_back(std::move(gm));
        }
        BiSer r(lo1, hi1, 0, hi2_);
        for (int m = 0; m < hi2_; ++m)
            for (int e1 = lo1; e1 < hi1; ++e1) {
                const Ser<K>& cm = cols[std::size_t(m)];
                r.at(e1, m) = (e1 >= cm.lo() && e1 < cm.hi()) ? cm.coeff(e1) : K(0);
            }
        return r;
    }

    BiSer derivative_var1() const {
        BiSer r(lo1_ - 1, hi1_ - 1, lo2_, hi2_);
        for (int e1 = lo1_; e1 < hi1_; ++e1)
            for (int e2 = lo2_; e2 < hi2_; ++e2) r.at(e1 - 1, e2) = K(long(e1)) * at(e1, e2);
        return r;
    }

    // Multiply by a univariate series along one variable.
    BiSer mul_var1(const Ser<K>& s) const {
        int v = s.valuation();
        int lo1 = lo1_ + v, hi1 = std::min(lo1_ + s.hi(), v + hi1_);
        BiSer r(std::min(lo1, hi1), hi1, lo2_, hi2_);
        for (int e1 = lo1_; e1 < hi1_; ++e1)
            for (int j = v; j < s.hi() && e1 + j < hi1; ++j) {
                K sj = s.coeff(j);
                if (sj.is_zero()) continue;
                for (int e2 = lo2_; e2 < hi2_; ++e2) {
                    const K& c = at(e1, e2);
                    if (!c.is_zero()) r.at(e1 + j, e2) += c * sj;
                }
            }
        return r;
    }
    BiSer mul_var2(const Ser<K>& s) const {
        int v = s.valuation();
        int lo2 = lo2_ + v, hi2 = std::min(lo2_ + s.hi(), v + hi2_);
        BiSer r(lo1_, hi1_, std::min(lo2, hi2), hi2);
        for (int e2 = lo2_; e2 < hi2_; ++e2)
            for (int j = v; j < s.hi() && e2 + j < hi2; ++j) {
                K sj = s.coeff(j);
                if (sj.is_zero()) continue;
                for (int e1 = lo1_; e1 < hi1_; ++e1) {
                    const K& c = at(e1, e2);
                    if (!c.is_zero()) r.at(e1, e2 + j) += c * sj;
                }
            }
        return r;
    }

    // Residue in var2 (coefficient of z2^{-1}) as a series in var1.
    Ser<K> residue_var2() const {
        if (-1 >= hi2_) throw truncation_deficit("residue outside biseries window");
        if (-1 < lo2_) return Ser<K>(lo1_, hi1_, std::vector<K>(hi1_ - lo1_, K(0)));
        return row_var2(-1);
    }

    // Re-embed into a possibly larger window; only valid when the extra
    // coefficients are exactly zero (true for Neumann powers of a corner-
    // vanishing series, whose windows only shrank through valuation bounds).
    BiSer padded(int hi1, int hi2) const {
        BiSer r(std::min(lo1_, 0), hi1, std::min(lo2_, 0), hi2);
        for (int e1 = lo1_; e1 < std::min(hi1_, hi1); ++e1)
            for (int e2 = lo2_; e2 < std::min(hi2_, hi2); ++e2) r.at(e1, e2) = at(e1, e2);
        return r;
    }

    // Coefficient of var1^e1 as a series in var2.
    Ser<K> row_var1(int e1) const {
        std::vector<K> c(hi2_ - lo2_, K(0));
        if (e1 >= lo1_ && e1 < hi1_)
            for (int e2 = lo2_; e2 < hi2_; ++e2) c[e2 - lo2_] = at(e1, e2);
        else if (e1 >= hi1_)
            throw truncation_deficit("biseries row outside window");
        return Ser<K>(lo2_, hi2_, std::move(c));
    }
    // Coefficient of var2^e2 as a series in var1.
    Ser<K> row_var2(int e2) const {
        std::vector<K> c(hi1_ - lo1_, K(0));
        if (e2 >= lo2_ && e2 < hi2_)
            for (int e1 = lo1_; e1 < hi1_; ++e1) c[e1 - lo1_] = at(e1, e2);
        else if (e2 >= hi2_)
            throw truncation_deficit("biseries row outside window");
        return Ser<K>(lo1_, hi1_, std::move(c));
    }

    // var2 -> -var2; `differential` adds the d(-zeta) sign.
    BiSer pullback_sigma_var2(bool differential) const {
        BiSer r = *this;
        for (int e1 = lo1_; e1 < hi1_; ++e1)
            for (int e2 = lo2_; e2 < hi2_; ++e2) {
                bool neg = (e2 % 2 != 0);
                if (differential) neg = !neg;
                if (neg) r.at(e1, e2) = -r.at(e1, e2);
            }
        return r;
    }

  private:
    std::size_t idx(int e1, int e2) const {
        return std::size_t(e1 - lo1_) * std::size_t(hi2_ - lo2_) + std::size_t(e2 - lo2_);
    }
    int lo1_, hi1_, lo2_, hi2_;
    std::vector<K> c_;
};

}

#endif
