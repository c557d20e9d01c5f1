#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#if defined(__GNUC__) && defined(__SIZEOF_FLOAT128__)
#define HEXLAT_HAVE_QUAD 1
extern "C" {
#include <quadmath.h>
}
#endif

namespace hexlat {

#ifdef HEXLAT_HAVE_QUAD
// Extended-precision scalar for finite-difference verification runs where
// double-precision cancellation would swamp the quantity being checked.
using quad = __float128;
inline quad sqrt_r(quad v) { return sqrtq(v); }
#else
using quad = long double;
#endif

inline double sqrt_r(double v) { return std::sqrt(v); }
inline long double sqrt_r(long double v) { return std::sqrt(v); }

template <class Real>
struct Vec2 {
    Real x{};
    Real y{};

    constexpr Vec2() = default;
    constexpr Vec2(Real xx, Real yy) : x(xx), y(yy) {}

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(Real s) const { return {x * s, y * s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }

    constexpr Real dot(const Vec2& o) const { return x * o.x + y * o.y; }
    // z-component of the 3d cross product; signed area of the spanned cell
    constexpr Real cross(const Vec2& o) const { return x * o.y - y * o.x; }
    constexpr Real norm2() const { return x * x + y * y; }
    Real norm() const { return sqrt_r(norm2()); }
};

template <class Real>
constexpr Vec2<Real> operator*(Real s, const Vec2<Real>& v) {
    return v * s;
}

using Vec2d = Vec2<double>;

// sqrt(3) and friends evaluated in the requested precision
template <class Real>
Real root3() {
    return sqrt_r(Real(3));
}

template <class Real>
Real fourth_root3() {
    return sqrt_r(sqrt_r(Real(3)));
}

// Circumcenter of the fundamental triangle of the unit-density hexagonal
// lattice: p = (1/(3^{1/4} sqrt2), 1/(3^{3/4} sqrt2)).
template <class Real>
Vec2<Real> hex_deep_hole_point() {
    const Real q = fourth_root3<Real>();
    const Real s2 = sqrt_r(Real(2));
    return {Real(1) / (q * s2), Real(1) / (q * q * q * s2)};
}

}  // namespace hexlat
