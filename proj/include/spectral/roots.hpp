#ifndef SPECTRAL_ROOTS_HPP
#define SPECTRAL_ROOTS_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include "poly.hpp"

namespace spectral {

namespace detail {

inline std::vector<Int> divisors_of(Int n) {
    if (sgn(n) < 0) n = -n;
    std::vector<Int> primes;
    Int m = n;
    for (Int p = 2; p * p <= m && p < 1000000; ++p) {
        while (m % p == 0) {
            primes.push_back(p);
            m /= p;
        }
    }
    if (m > 1) primes.push_back(m);
    std::vector<Int> divs{1};
    Int last = 0;
    std::size_t run_start = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (primes[i] != last) {
            run_start = 0;
            last = primes[i];
        }
        std::size_t sz = divs.size();
        for (std::size_t j = run_start; j < sz; ++j) divs.push_back(divs[j] * primes[i]);
        run_start = sz;
    }
    std::sort(divs.begin(), divs.end());
    divs.erase(std::unique(divs.begin(), divs.end()), divs.end());
    return divs;
}

inline bool rational_coeffs(const Poly<Scalar>& p) {
    for (const Scalar& c : p.coeffs())
        if (!c.is_rational()) return false;
    return true;
}

}  // namespace detail

// One root of p inside the tower, adjoining square roots as needed.
inline Scalar find_one_root(const Poly<Scalar>& p, TowerCtx& ctx) {
    int d = p.deg();
    if (d <= 0) throw internal_consistency_error("root of constant polynomial");
    if (p.coeff(0).is_zero()) return Scalar(0);
    if (d == 1) return -p.coeff(0) / p.coeff(1);
    if (d == 2) {
        Scalar a = p.coeff(2), b = p.coeff(1), c = p.coeff(0);
        Scalar disc = b * b - Scalar(4) * a * c;
        Scalar s = ctx.sqrt(disc);
        return (-b + s) / (Scalar(2) * a);
    }
    if (detail::rational_coeffs(p)) {
        // rational-root scan on the integer-cleared polynomial
        Int lcm = 1;
        for (const Scalar& c : p.coeffs())
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.to_rational().get_den().get_mpz_t());
        std::vector<Int> ic;
        for (const Scalar& c : p.coeffs()) {
            Rat q = c.to_rational() * Rat(lcm);
            ic.push_back(q.get_num());
        }
        auto ps = detail::divisors_of(ic.front());
        auto qs = detail::divisors_of(ic.back());
        for (const Int& pp : ps)
            for (const Int& qq : qs)
                for (int sign = 0; sign < 2; ++sign) {
                    Rat cand(sign ? -pp : pp, qq);
                    cand.canonicalize();
                    if (p.eval(Scalar(cand)).is_zero()) return Scalar(cand);
                }
    }
    // even polynomial: substitute w = z^2
    bool even = true;
    for (int e = 1; e <= d; e += 2)
        if (!p.coeff(e).is_zero()) even = false;
    if (even) {
        std::vector<Scalar> qc;
        for (int e = 0; e <= d; e += 2) qc.push_back(p.coeff(e));
        Scalar w = find_one_root(Poly<Scalar>(std::move(qc)), ctx);
        return ctx.sqrt(w);
    }
    throw unsolvable_error("polynomial factor of degree " + std::to_string(d) +
                           " has no root reachable by quadratic adjunction");
}

// Complete factorization into roots with multiplicities (throws if the tower
// cannot split the polynomial).  Deterministic order of discovery.
inline std::vector<std::pair<Scalar, int>> find_roots(Poly<Scalar> p, TowerCtx& ctx) {
    if (p.is_zero()) throw internal_consistency_error("roots of zero polynomial");
    std::vector<std::pair<Scalar, int>> out;
    while (p.deg() > 0) {
        Scalar r = find_one_root(p, ctx);
        Poly<Scalar> lin(std::vector<Scalar>{-r, Scalar(1)});
        int mult = 0;
        for (;;) {
            auto [q, rem] = divmod(p, lin);
            if (!rem.is_zero()) break;
            p = q;
            ++mult;
        }
        if (mult == 0) throw internal_consistency_error("claimed root does not divide");
        out.emplace_back(r, mult);
    }
    return out;
}

template <class K>
struct RootFinder;

template <>
struct RootFinder<Scalar> {
    static std::vector<std::pair<Scalar, int>> roots(const Poly<Scalar>& p, TowerCtx& ctx) {
        return find_roots(p, ctx);
    }
};

template <>
struct RootFinder<JScalar> {
    // Roots of the base-point fiber, lifted to first order in the parameter.
    // A multiplicity-m root must persist with multiplicity m along the family.
    static std::vector<std::pair<JScalar, int>> roots(const Poly<JScalar>& p, TowerCtx& ctx) {
        std::vector<Scalar> av, bv;
        for (const JScalar& c : p.coeffs()) {
            av.push_back(c.v);
            bv.push_back(c.d);
        }
        Poly<Scalar> A{std::move(av)};
        auto base = find_roots(A, ctx);
        std::vector<std::pair<JScalar, int>> out;
        for (auto& [r0, m] : base) {
            Poly<JScalar> g = p;
            for (int i = 1; i < m; ++i) g = g.derivative();
            Scalar gv(0), gd(0), gpv(0);
            {
                Poly<JScalar> gp = g.derivative();
                JScalar at = g.eval(JScalar(r0));
                JScalar atp = gp.eval(JScalar(r0));
                gv = at.v;
                gd = at.d;
                gpv = atp.v;
            }
            if (!gv.is_zero() || gpv.is_zero())
                throw internal_consistency_error("jet root lift: base root inconsistent");
            JScalar r(r0, -gd / gpv);
            // confirm the multiplicity persists to first order
            Poly<JScalar> lin(std::vector<JScalar>{-r, JScalar(Scalar(1))});
            Poly<JScalar> q = p;
            for (int i = 0; i < m; ++i) {
                auto [qq, rem] = divmod(q, lin);
                if (!rem.is_zero())
                    throw degeneracy_error("family changes ramification profile at first order");
                q = qq;
            }
            out.emplace_back(r, m);
        }
        return out;
    }
};

}

#endif
