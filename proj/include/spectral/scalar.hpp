#ifndef SPECTRAL_SCALAR_HPP
#define SPECTRAL_SCALAR_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"

namespace spectral {

using Int = mpz_class;
using Rat = mpq_class;

inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline bool rat_is_square(const Rat& q, Rat* root = nullptr) {
    if (sgn(q) < 0) return false;
    if (sgn(q) == 0) { if (root) *root = 0; return true; }
    const Int& n = q.get_num();
    const Int& d = q.get_den();
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
    if (mpz_perfect_square_p(d.get_mpz_t()) == 0) return false;
    if (root) {
        Int rn, rd;
        mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
        *root = Rat(rn, rd);
    }
    return true;
}

// One level of a lazily built tower of quadratic extensions of Q.  The
// radicand is stored as a coefficient vector over the parent level's basis
// (size 2^(depth-1)); basis index bit k-1 selects root k.
struct Tower {
    std::shared_ptr<const Tower> parent;
    std::vector<Rat> rad;
    int depth = 0;
};

using TowerPtr = std::shared_ptr<const Tower>;

inline int tower_depth(const Tower* t) { return t ? t->depth : 0; }

namespace detail {

// out += a*b, all of size 2^d over the tower whose deepest node is tw.
inline void mul_acc(const Tower* tw, int d, const Rat* a, const Rat* b, Rat* out) {
    if (d == 0) {
        out[0] += a[0] * b[0];
        return;
    }
    const std::size_t h = std::size_t(1) << (d - 1);
    const Tower* par = tw->parent.get();
    mul_acc(par, d - 1, a, b, out);
    std::vector<Rat> hh(h), hr(h);
    mul_acc(par, d - 1, a + h, b + h, hh.data());
    mul_acc(par, d - 1, hh.data(), tw->rad.data(), hr.data());
    for (std::size_t i = 0; i < h; ++i) out[i] += hr[i];
    mul_acc(par, d - 1, a, b + h, out + h);
    mul_acc(par, d - 1, a + h, b, out + h);
}

inline bool all_zero(const Rat* a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (sgn(a[i]) != 0) return false;
    return true;
}

inline std::vector<Rat> inv_vec(const Tower* tw, int d, const Rat* a) {
    if (d == 0) {
        if (sgn(a[0]) == 0) throw error_base("division by zero scalar");
        return {Rat(1) / a[0]};
    }
    const std::size_t h = std::size_t(1) << (d - 1);
    const Tower* par = tw->parent.get();
    // n = lo^2 - hi^2 * rad lives over the parent and is nonzero because the
    // radicand is never a square at its own level.
    std::vector<Rat> n(h), hh(h), hr(h);
    mul_acc(par, d - 1, a, a, n.data());
    mul_acc(par, d - 1, a + h, a + h, hh.data());
    mul_acc(par, d - 1, hh.data(), tw->rad.data(), hr.data());
    for (std::size_t i = 0; i < h; ++i) n[i] -= hr[i];
    if (all_zero(n.data(), h)) {
        if (all_zero(a, 2 * h)) throw error_base("division by zero scalar");
        throw internal_consistency_error("tower radicand is a square at its own level");
    }
    std::vector<Rat> ni = inv_vec(par, d - 1, n.data());
    std::vector<Rat> out(2 * h);
    mul_acc(par, d - 1, a, ni.data(), out.data());
    std::vector<Rat> oh(h);
    mul_acc(par, d - 1, a + h, ni.data(), oh.data());
    for (std::size_t i = 0; i < h; ++i) out[h + i] = -oh[i];
    return out;
}

}  // namespace detail

class Scalar {
  public:
    Scalar() : c_(1) {}
    Scalar(long n) : c_(1) { c_[0] = n; }
    Scalar(int n) : c_(1) { c_[0] = n; }
    Scalar(const Rat& q) : c_(1) { c_[0] = q; }
    Scalar(TowerPtr tw, std::vector<Rat> c) : tw_(std::move(tw)), c_(std::move(c)) {
        if (c_.size() != (std::size_t(1) << tower_depth(tw_.get())))
            throw internal_consistency_error("scalar coefficient vector size mismatch");
    }

    int depth() const { return tower_depth(tw_.get()); }
    const TowerPtr& tower() const { return tw_; }
    const std::vector<Rat>& coeffs() const { return c_; }

    bool is_zero() const { return detail::all_zero(c_.data(), c_.size()); }

    bool is_rational() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (sgn(c_[i]) != 0) return false;
        return true;
    }
    Rat to_rational() const {
        if (!is_rational()) throw internal_consistency_error("scalar is not rational");
        return c_[0];
    }

    // True if `anc` is this scalar's tower or one of its ancestors.
    static bool is_ancestor(const Tower* anc, const Tower* t) {
        int da = tower_depth(anc), dt = tower_depth(t);
        if (da > dt) return false;
        while (dt > da) { t = t->parent.get(); --dt; }
        return t == anc;
    }

    Scalar lifted_to(const TowerPtr& tw) const {
        if (tw.get() == tw_.get()) return *this;
        if (!is_ancestor(tw_.get(), tw.get()))
            throw internal_consistency_error("incompatible scalar towers");
        std::vector<Rat> c(std::size_t(1) << tower_depth(tw.get()));
        for (std::size_t i = 0; i < c_.size(); ++i) c[i] = c_[i];
        return Scalar(tw, std::move(c));
    }

    friend void unify(Scalar& a, Scalar& b) {
        if (a.tw_.get() == b.tw_.get()) return;
        if (a.depth() < b.depth()) a = a.lifted_to(b.tw_);
        else b = b.lifted_to(a.tw_);
    }

    friend Scalar operator+(Scalar a, Scalar b) {
        unify(a, b);
        for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
        return a;
    }
    friend Scalar operator-(Scalar a, Scalar b) {
        unify(a, b);
        for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] -= b.c_[i];
        return a;
    }
    Scalar operator-() const {
        Scalar r = *this;
        for (auto& q : r.c_) q = -q;
        return r;
    }
    friend Scalar operator*(Scalar a, Scalar b) {
        unify(a, b);
        std::vector<Rat> out(a.c_.size());
        detail::mul_acc(a.tw_.get(), a.depth(), a.c_.data(), b.c_.data(), out.data());
        return Scalar(a.tw_, std::move(out));
    }
    Scalar inv() const {
        std::vector<Rat> out = detail::inv_vec(tw_.get(), depth(), c_.data());
        return Scalar(tw_, std::move(out));
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inv(); }

    Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
    Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
    Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
    Scalar& operator/=(const Scalar& b) { return *this = *this / b; }

    friend bool operator==(Scalar a, Scalar b) {
        unify(a, b);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (a.c_[i] != b.c_[i]) return false;
        return true;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    // Deterministic total order on a common tower (lexicographic on coefficients).
    friend int cmp_lex(Scalar a, Scalar b) {
        unify(a, b);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            int c = cmp(a.c_[i], b.c_[i]);
            if (c != 0) return c;
        }
        return 0;
    }

    std::complex<double> approx() const {
        return approx_vec(tw_.get(), depth(), c_.data());
    }

    std::string str() const {
        if (is_rational()) return rat_str(c_[0]);
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (sgn(c_[i]) == 0) continue;
            if (!first) os << " + ";
            first = false;
            os << "(" << rat_str(c_[i]) << ")";
            for (int k = 0; k < depth(); ++k)
                if (i & (std::size_t(1) << k)) os << "*r" << (k + 1);
        }
        if (first) os << "0";
        return os.str();
    }

  private:
    static std::complex<double> root_approx(const Tower* tw) {
        std::complex<double> rad = approx_vec(tw->parent.get(), tw->depth - 1, tw->rad.data());
        return std::sqrt(rad);
    }
    static std::complex<double> approx_vec(const Tower* tw, int d, const Rat* c) {
        if (d == 0) return {c[0].get_d(), 0.0};
        const std::size_t h = std::size_t(1) << (d - 1);
        std::complex<double> lo = approx_vec(tw->parent.get(), d - 1, c);
        std::complex<double> hi = approx_vec(tw->parent.get(), d - 1, c + h);
        return lo + hi * root_approx(tw);
    }

    TowerPtr tw_;
    std::vector<Rat> c_;
};

namespace detail {

// Complete square test inside the scalar's own tower.
inline std::optional<Scalar> sqrt_in(const Scalar& s) {
    const int d = s.depth();
    if (d == 0) {
        Rat root;
        if (rat_is_square(s.to_rational(), &root)) return Scalar(root);
        return std::nullopt;
    }
    const TowerPtr par = s.tower()->parent;
    const std::size_t h = std::size_t(1) << (d - 1);
    std::vector<Rat> lo(s.coeffs().begin(), s.coeffs().begin() + h);
    std::vector<Rat> hi(s.coeffs().begin() + h, s.coeffs().end());
    Scalar a(par, std::move(lo)), b(par, std::move(hi));
    Scalar rho(par, s.tower()->rad);
    auto with_root = [&](const Scalar& c, const Scalar& e) {
        std::vector<Rat> out(2 * h);
        Scalar cl = c.lifted_to(par), el = e.lifted_to(par);
        for (std::size_t i = 0; i < h; ++i) {
            out[i] = cl.coeffs()[i];
            out[h + i] = el.coeffs()[i];
        }
        return Scalar(s.tower(), std::move(out));
    };
    if (b.is_zero()) {
        if (auto t = sqrt_in(a)) return t->lifted_to(s.tower());
        if (auto t = sqrt_in(a / rho)) return with_root(Scalar(0), *t);
        return std::nullopt;
    }
    auto n = sqrt_in(a * a - b * b * rho);
    if (!n) return std::nullopt;
    for (int sign = 0; sign < 2; ++sign) {
        Scalar nn = sign ? -*n : *n;
        Scalar c2 = (a + nn) / Scalar(2);
        if (c2.is_zero()) continue;
        auto c = sqrt_in(c2);
        if (!c || c->is_zero()) continue;
        Scalar e = b / (Scalar(2) * *c);
        Scalar cand = with_root(*c, e);
        if (cand * cand == s.lifted_to(s.tower())) return cand;
    }
    // s = b*r with a = 0: reduces to the generic case via n = 0 handled above;
    // remaining possibility is sqrt(-rho) times a parent square.
    if (a.is_zero()) {
        if (auto m = sqrt_in(-rho)) {
            // (x + y r)^2 = b r with x = y m requires 2 x y = b, x^2 + y^2 rho = 0.
            Scalar y2 = b / (Scalar(2) * *m);
            if (auto y = sqrt_in(y2)) {
                Scalar cand = with_root(*m * *y, *y);
                if (cand * cand == s.lifted_to(s.tower())) return cand;
            }
        }
    }
    return std::nullopt;
}

inline Scalar canonical_sign(Scalar r) {
    for (const Rat& q : r.coeffs()) {
        int sg = sgn(q);
        if (sg > 0) return r;
        if (sg < 0) return -r;
    }
    return r;
}

}  // namespace detail

// Holds the deepest tower built so far in one computation; all scalars in a
// pipeline run share one context so unify() always succeeds.
class TowerCtx {
  public:
    const TowerPtr& top() const { return top_; }
    int depth() const { return tower_depth(top_.get()); }

    Scalar lift(const Scalar& s) const { return s.lifted_to(top_); }

    // Square root inside the current tower, adjoining a new level when the
    // radicand is not a square.  sqrt(0) = 0.  Deterministic sign: an in-tower
    // root is normalized to have positive first nonzero coefficient; a fresh
    // root is the new basis element itself.
    Scalar sqrt(const Scalar& s) {
        if (s.is_zero()) return Scalar(0);
        Scalar sl = lift(s);
        if (auto r = detail::sqrt_in(sl)) return detail::canonical_sign(*r);
        auto t = std::make_shared<Tower>();
        t->parent = top_;
        t->rad = sl.coeffs();
        t->depth = depth() + 1;
        top_ = t;
        std::vector<Rat> c(std::size_t(1) << t->depth);
        c[std::size_t(1) << (t->depth - 1)] = 1;
        return Scalar(top_, std::move(c));
    }

    Scalar adjoin_sqrt(const Scalar& s) {
        if (s.is_zero()) throw degeneracy_error("adjoin_sqrt of zero radicand");
        return sqrt(s);
    }

    // Radicands of each level as coefficient strings over the previous level.
    std::vector<std::vector<std::string>> description() const {
        std::vector<std::vector<std::string>> out;
        std::vector<const Tower*> chain;
        for (const Tower* t = top_.get(); t; t = t->parent.get()) chain.push_back(t);
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            std::vector<std::string> level;
            for (const Rat& q : (*it)->rad) level.push_back(rat_str(q));
            out.push_back(std::move(level));
        }
        return out;
    }

  private:
    TowerPtr top_;
};

}

#endif
