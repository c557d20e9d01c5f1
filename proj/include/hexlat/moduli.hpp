#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "hexlat/geometry.hpp"

namespace hexlat {

// A point tau = x + i y of the upper half plane. Each tau labels the
// rotation class of a unit-density planar lattice.
struct HalfPlanePoint {
    double x;
    double y;

    HalfPlanePoint(double xx, double yy) : x(xx), y(yy) {
        if (!(y > 0.0)) throw std::domain_error("HalfPlanePoint: y must be positive");
    }

    double abs2() const { return x * x + y * y; }
};

struct reduction_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integer matrix with determinant one, acting on the half plane by
// tau -> (a tau + b) / (c tau + d).
struct UnimodularIntMatrix {
    long long a, b, c, d;

    UnimodularIntMatrix(long long aa, long long bb, long long cc, long long dd)
        : a(aa), b(bb), c(cc), d(dd) {
        if (a * d - b * c != 1)
            throw std::invalid_argument("UnimodularIntMatrix: determinant must be 1");
    }

    static UnimodularIntMatrix identity() { return {1, 0, 0, 1}; }

    long long det() const { return a * d - b * c; }

    bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }

    UnimodularIntMatrix inverse() const { return {d, -b, -c, a}; }

    UnimodularIntMatrix operator*(const UnimodularIntMatrix& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }

    bool operator==(const UnimodularIntMatrix& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }

    // Canonical representative of the {+M, -M} class: c > 0, or c == 0 and a > 0.
    UnimodularIntMatrix sign_normalized() const {
        if (c < 0 || (c == 0 && a < 0)) return {-a, -b, -c, -d};
        return *this;
    }

    // Fractional-linear action; with det 1 the image stays in the half plane.
    HalfPlanePoint apply(const HalfPlanePoint& t) const {
        const double nx = static_cast<double>(a) * t.x + static_cast<double>(b);
        const double ny = static_cast<double>(a) * t.y;
        const double dx = static_cast<double>(c) * t.x + static_cast<double>(d);
        const double dy = static_cast<double>(c) * t.y;
        const double den = dx * dx + dy * dy;
        return {(nx * dx + ny * dy) / den, (ny * dx - nx * dy) / den};
    }
};

// Unit-density basis v1 = y^{-1/2} (1, 0), w1 = y^{-1/2} (x, y).
struct Basis {
    Vec2d v1;
    Vec2d w1;
    double x;
    double y;

    Vec2d point(double k, double l) const { return v1 * k + w1 * l; }
    double cell_area() const { return v1.cross(w1); }
};

struct DeepHole {
    Vec2d p;
};

inline Basis basis_from_params(double x, double y) {
    if (!(y > 0.0)) throw std::domain_error("basis_from_params: y must be positive");
    const double s = 1.0 / std::sqrt(y);
    return {{s, 0.0}, {s * x, s * y}, x, y};
}

// Hexagonal lattice of density 1, parameters (x, y) = (1/2, sqrt3/2).
inline Basis hex_lattice() { return basis_from_params(0.5, std::sqrt(3.0) / 2.0); }

// Circumcenter p = (v + w)/3 of the hexagonal fundamental triangle.
inline DeepHole deep_hole() { return {hex_deep_hole_point<double>()}; }

// Euclidean distance of the concatenated basis vectors in R^4.
inline double lattice_distance(const Basis& b1, const Basis& b2) {
    const Vec2d dv = b1.v1 - b2.v1;
    const Vec2d dw = b1.w1 - b2.w1;
    return std::sqrt(dv.norm2() + dw.norm2());
}

inline constexpr double kFundamentalDomainTol = 1e-12;
inline constexpr int kReductionIterationCap = 10000;

inline bool in_fundamental_domain(const HalfPlanePoint& t,
                                  double tol = kFundamentalDomainTol) {
    return t.abs2() >= 1.0 - tol && std::abs(t.x) <= 0.5 + tol;
}

struct ReducedPoint {
    HalfPlanePoint tau;
    UnimodularIntMatrix transform;  // transform o tau == the input point
};

// Gauss reduction into D = { |tau| >= 1, |Re tau| <= 1/2 }: translate the
// real part into (-1/2, 1/2], invert while inside the unit circle, repeat.
// Boundary ties resolve to Re tau = +1/2 and, on |tau| = 1, to Re tau >= 0.
inline ReducedPoint reduce_to_fundamental_domain(HalfPlanePoint t,
                                                 double tol = kFundamentalDomainTol) {
    // M tracks the maps applied so far: current = M o input.
    long long ma = 1, mb = 0, mc = 0, md = 1;
    const auto translate = [&](long long n) {
        // tau -> tau - n
        t.x -= static_cast<double>(n);
        ma -= n * mc;
        mb -= n * md;
    };
    const auto invert = [&] {
        // tau -> -1/tau
        const double r2 = t.abs2();
        t = HalfPlanePoint(-t.x / r2, t.y / r2);
        std::swap(ma, mc);
        std::swap(mb, md);
        ma = -ma;
        mb = -mb;
    };

    int iter = 0;
    for (;;) {
        if (++iter > kReductionIterationCap)
            throw reduction_error("reduce_to_fundamental_domain: iteration cap reached");
        const long long n = static_cast<long long>(std::ceil(t.x - 0.5));
        if (n != 0) translate(n);
        if (t.abs2() < 1.0 - tol) {
            invert();
            continue;
        }
        break;
    }
    if (std::abs(t.x + 0.5) <= tol) translate(-1);
    if (std::abs(t.abs2() - 1.0) <= 2.0 * tol && t.x < -tol) invert();

    const UnimodularIntMatrix m(ma, mb, mc, md);
    return {t, m.inverse().sign_normalized()};
}

}  // namespace hexlat
