#ifndef SPECTRAL_JET_HPP
#define SPECTRAL_JET_HPP

#include "scalar.hpp"

namespace spectral {

// First-order jet (dual number) a + eps*b with eps^2 = 0; carries exact
// directional derivatives through the whole pipeline.
template <class K>
struct Jet {
    K v{};
    K d{};

    Jet() = default;
    Jet(long n) : v(n) {}
    Jet(int n) : v(n) {}
    Jet(const K& value) : v(value) {}
    Jet(const K& value, const K& deriv) : v(value), d(deriv) {}

    bool is_zero() const { return v.is_zero() && d.is_zero(); }

    friend Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d + b.d}; }
    friend Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d - b.d}; }
    Jet operator-() const { return {-v, -d}; }
    friend Jet operator*(const Jet& a, const Jet& b) {
        return {a.v * b.v, a.v * b.d + a.d * b.v};
    }
    Jet inv() const {
        K vi = v.inv();
        return {vi, -(d * vi * vi)};
    }
    friend Jet operator/(const Jet& a, const Jet& b) { return a * b.inv(); }

    Jet& operator+=(const Jet& b) { return *this = *this + b; }
    Jet& operator-=(const Jet& b) { return *this = *this - b; }
    Jet& operator*=(const Jet& b) { return *this = *this * b; }
    Jet& operator/=(const Jet& b) { return *this = *this / b; }

    friend bool operator==(const Jet& a, const Jet& b) { return a.v == b.v && a.d == b.d; }
    friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }
};

using JScalar = Jet<Scalar>;

// Uniform ring interface for code templated over the coefficient ring.
template <class K>
struct Ring;

template <>
struct Ring<Scalar> {
    static constexpr bool is_field = true;
    static bool is_unit(const Scalar& a) { return !a.is_zero(); }
    static const Scalar& value(const Scalar& a) { return a; }
    static Scalar from_scalar(const Scalar& a) { return a; }
    static Scalar sqrt(TowerCtx& ctx, const Scalar& a) { return ctx.sqrt(a); }
};

template <>
struct Ring<JScalar> {
    static constexpr bool is_field = false;
    static bool is_unit(const JScalar& a) { return !a.v.is_zero(); }
    static const Scalar& value(const JScalar& a) { return a.v; }
    static JScalar from_scalar(const Scalar& a) { return JScalar(a); }
    static JScalar sqrt(TowerCtx& ctx, const JScalar& a) {
        Scalar s = ctx.sqrt(a.v);
        if (s.is_zero()) throw degeneracy_error("jet sqrt at a zero of even order");
        return {s, a.d / (Scalar(2) * s)};
    }
};

}

#endif
