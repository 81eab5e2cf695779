#ifndef SPECTRAL_POLY_HPP
#define SPECTRAL_POLY_HPP

#include <vector>

#include "jet.hpp"

namespace spectral {

// Univariate polynomial, ascending coefficients, trailing zeros trimmed.
template <class K>
class Poly {
  public:
    Poly() = default;
    Poly(const K& c0) { c_.push_back(c0); trim(); }
    explicit Poly(std::vector<K> c) : c_(std::move(c)) { trim(); }

    static Poly monomial(int e, const K& coef = K(1)) {
        std::vector<K> c(e + 1);
        c[e] = coef;
        return Poly(std::move(c));
    }

    const std::vector<K>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int deg() const { return int(c_.size()) - 1; }  // -1 for the zero polynomial
    K coeff(int e) const {
        if (e < 0 || e >= int(c_.size())) return K(0);
        return c_[e];
    }
    const K& lead() const { return c_.back(); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<K> c(std::max(a.c_.size(), b.c_.size()), K(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return Poly(std::move(c));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<K> c(std::max(a.c_.size(), b.c_.size()), K(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
        return Poly(std::move(c));
    }
    Poly operator-() const {
        Poly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<K> c(a.c_.size() + b.c_.size() - 1, K(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(c));
    }
    friend Poly operator*(const K& s, const Poly& p) {
        Poly r = p;
        for (auto& x : r.c_) x = s * x;
        r.trim();
        return r;
    }
    Poly& operator+=(const Poly& b) { return *this = *this + b; }
    Poly& operator-=(const Poly& b) { return *this = *this - b; }
    Poly& operator*=(const Poly& b) { return *this = *this * b; }

    friend bool operator==(const Poly& a, const Poly& b) { return (a - b).is_zero(); }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    K eval(const K& x) const {
        K r(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<K> c(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = K(long(i)) * c_[i];
        return Poly(std::move(c));
    }

    // Coefficients of p(t + a).
    Poly shifted(const K& a) const {
        Poly r;
        Poly lin(std::vector<K>{a, K(1)});
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * lin + Poly(*it);
        return r;
    }

    // Quotient and remainder; divisor's leading coefficient must be a unit.
    friend std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
        if (b.is_zero()) throw error_base("polynomial division by zero");
        if (!Ring<K>::is_unit(b.lead()))
            throw error_base("polynomial division: non-unit leading coefficient");
        K linv = K(1) / b.lead();
        std::vector<K> q;
        int db = b.deg();
        while (a.deg() >= db) {
            int e = a.deg() - db;
            K f = a.lead() * linv;
            if (int(q.size()) < e + 1) q.resize(e + 1, K(0));
            q[e] += f;
            for (int i = 0; i <= db; ++i) {
                std::size_t idx = std::size_t(e + i);
                a.c_[idx] -= f * b.c_[i];
            }
            a.trim();
        }
        return {Poly(std::move(q)), a};
    }

    Poly monic() const {
        if (is_zero()) return *this;
        K li = K(1) / lead();
        return li * *this;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<K> c_;
};

template <class K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {
    static_assert(Ring<K>::is_field, "gcd needs a field");
    while (!b.is_zero()) {
        auto [q, r] = divmod(a, b.monic());
        (void)q;
        a = b;
        b = r;
    }
    return a.monic();
}

// num/den; over a field the fraction is kept reduced with monic denominator.
template <class K>
class RatFun {
  public:
    RatFun() : num_(), den_(K(1)) {}
    RatFun(const K& c) : num_(c), den_(K(1)) {}
    RatFun(Poly<K> n, Poly<K> d) : num_(std::move(n)), den_(std::move(d)) {
        if (den_.is_zero()) throw error_base("rational function with zero denominator");
        normalize();
    }
    explicit RatFun(Poly<K> n) : num_(std::move(n)), den_(K(1)) {}

    static RatFun z() { return RatFun(Poly<K>::monomial(1)); }

    const Poly<K>& num() const { return num_; }
    const Poly<K>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_poly() const { return den_.deg() == 0; }

    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator-(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    RatFun operator-() const { return RatFun(-num_, den_, no_normalize{}); }
    friend RatFun operator*(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFun operator/(const RatFun& a, const RatFun& b) {
        if (b.is_zero()) throw error_base("rational function division by zero");
        return RatFun(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend RatFun operator*(const K& s, const RatFun& a) {
        return RatFun(s * a.num_, a.den_);
    }
    RatFun& operator+=(const RatFun& b) { return *this = *this + b; }
    RatFun& operator-=(const RatFun& b) { return *this = *this - b; }
    RatFun& operator*=(const RatFun& b) { return *this = *this * b; }
    RatFun& operator/=(const RatFun& b) { return *this = *this / b; }

    friend bool operator==(const RatFun& a, const RatFun& b) {
        return (a.num_ * b.den_ - b.num_ * a.den_).is_zero();
    }
    friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }

    RatFun derivative() const {
        return RatFun(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }

    K eval(const K& x) const {
        K d = den_.eval(x);
        if (!Ring<K>::is_unit(d)) throw error_base("rational function evaluated at a pole");
        return num_.eval(x) / d;
    }

    RatFun pow_int(int e) const {
        if (e < 0) return RatFun(K(1)) / pow_int(-e);
        RatFun r(K(1)), b = *this;
        for (; e; e >>= 1) {
            if (e & 1) r *= b;
            b *= b;
        }
        return r;
    }

    // Order of vanishing at infinity: deg den - deg num (negative = pole).
    int order_at_infinity() const {
        if (is_zero()) throw error_base("order of zero function");
        return den_.deg() - num_.deg();
    }

  private:
    struct no_normalize {};
    RatFun(Poly<K> n, Poly<K> d, no_normalize) : num_(std::move(n)), den_(std::move(d)) {}
    void normalize() {
        if constexpr (Ring<K>::is_field) {
            if (num_.is_zero()) {
                den_ = Poly<K>(K(1));
                return;
            }
            Poly<K> g = poly_gcd(num_, den_);
            if (g.deg() > 0) {
                num_ = divmod(num_, g).first;
                den_ = divmod(den_, g).first;
            }
            K li = K(1) / den_.lead();
            num_ = li * num_;
            den_ = li * den_;
        } else {
            if (!Ring<K>::is_unit(den_.lead()))
                throw degeneracy_error("family denominator drops degree at base point");
        }
    }
    Poly<K> num_, den_;
};

}

#endif
