#pragma once

#include <cmath>

namespace ricciglue {

/// Value and first three derivatives of a scalar function at a point.
struct Derivs {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
};

/// Truncated Taylor series c0 + c1 h + c2 h^2 + c3 h^3 (forward-mode AD to order 3).
struct Jet {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;

    constexpr Jet() = default;
    constexpr Jet(double value) : c0(value) {}  // NOLINT: implicit constants are the point
    constexpr Jet(double a0, double a1, double a2, double a3) : c0(a0), c1(a1), c2(a2), c3(a3) {}

    static constexpr Jet variable(double x) { return {x, 1.0, 0.0, 0.0}; }
    static constexpr Jet from_derivs(const Derivs& d) { return {d.v, d.d1, d.d2 / 2.0, d.d3 / 6.0}; }

    constexpr Derivs derivs() const { return {c0, c1, 2.0 * c2, 6.0 * c3}; }
};

constexpr Jet operator+(const Jet& a, const Jet& b) { return {a.c0 + b.c0, a.c1 + b.c1, a.c2 + b.c2, a.c3 + b.c3}; }
constexpr Jet operator-(const Jet& a, const Jet& b) { return {a.c0 - b.c0, a.c1 - b.c1, a.c2 - b.c2, a.c3 - b.c3}; }
constexpr Jet operator-(const Jet& a) { return {-a.c0, -a.c1, -a.c2, -a.c3}; }

constexpr Jet operator*(const Jet& a, const Jet& b) {
    return {a.c0 * b.c0,
            a.c0 * b.c1 + a.c1 * b.c0,
            a.c0 * b.c2 + a.c1 * b.c1 + a.c2 * b.c0,
            a.c0 * b.c3 + a.c1 * b.c2 + a.c2 * b.c1 + a.c3 * b.c0};
}

constexpr Jet operator/(const Jet& a, const Jet& b) {
    const double q0 = a.c0 / b.c0;
    const double q1 = (a.c1 - q0 * b.c1) / b.c0;
    const double q2 = (a.c2 - q0 * b.c2 - q1 * b.c1) / b.c0;
    const double q3 = (a.c3 - q0 * b.c3 - q1 * b.c2 - q2 * b.c1) / b.c0;
    return {q0, q1, q2, q3};
}

inline Jet& operator+=(Jet& a, const Jet& b) { return a = a + b; }
inline Jet& operator-=(Jet& a, const Jet& b) { return a = a - b; }
inline Jet& operator*=(Jet& a, const Jet& b) { return a = a * b; }

/// F(a) given F and its derivatives at a.c0 (Faa di Bruno in Taylor-coefficient form).
constexpr Jet compose(const Derivs& f, const Jet& a) {
    return {f.v,
            f.d1 * a.c1,
            f.d1 * a.c2 + 0.5 * f.d2 * a.c1 * a.c1,
            f.d1 * a.c3 + f.d2 * a.c1 * a.c2 + f.d3 / 6.0 * a.c1 * a.c1 * a.c1};
}

/// Series of the derivative (loses the top coefficient).
constexpr Jet derivative(const Jet& a) { return {a.c1, 2.0 * a.c2, 3.0 * a.c3, 0.0}; }

inline Jet sin(const Jet& a) {
    const double s = std::sin(a.c0), c = std::cos(a.c0);
    return compose({s, c, -s, -c}, a);
}

inline Jet cos(const Jet& a) {
    const double s = std::sin(a.c0), c = std::cos(a.c0);
    return compose({c, -s, -c, s}, a);
}

inline Jet exp(const Jet& a) {
    const double e = std::exp(a.c0);
    return compose({e, e, e, e}, a);
}

inline Jet sqrt(const Jet& a) {
    const double r = std::sqrt(a.c0);
    return compose({r, 0.5 / r, -0.25 / (r * a.c0), 0.375 / (r * a.c0 * a.c0)}, a);
}

}  // namespace ricciglue
