#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hexlat/geometry.hpp"
#include "hexlat/kernel.hpp"
#include "hexlat/moduli.hpp"
#include "hexlat/shells.hpp"

namespace hexlat {

inline constexpr double kMinFiniteDifferenceStep = 1e-12;

// The triple map extends to real (k, l); the polar-limit checks evaluate it
// off the integer grid.
template <class Real>
std::array<Vec2<Real>, 3> triple_points(Real k, Real l, Real x, Real y) {
    const Real sy = sqrt_r(y);
    const auto pt = [&](Real a, Real b) { return Vec2<Real>{(a + b * x) / sy, b * sy}; };
    return {pt(k, l), pt(1 - k - l, k), pt(l, 1 - k - l)};
}

// Sum of squared distances from the fixed hexagonal deep hole to the triple
// of lattice points generated by (k, l) in the basis of (x, y).
template <class Real>
Real triple_energy_squared(Real k, Real l, Real x, Real y) {
    if (!(y > Real(0))) throw std::domain_error("triple_energy_squared: y must be positive");
    const Vec2<Real> p = hex_deep_hole_point<Real>();
    Real acc(0);
    for (const Vec2<Real>& q : triple_points(k, l, x, y)) acc += (q - p).norm2();
    return acc;
}

// Same quantity via the explicit algebraic form, kept as the second route of
// the two-route consistency checks:
//   f = 2 ((x-1/2)^2 + y^2 + 3/4) / y * (k^2 + kl + l^2 - k - l)
//     + (3x^2 - 3^{3/4} sqrt2 x sqrt y + 3y^2 - 3^{1/4} sqrt2 y^{3/2}
//        + 2 sqrt3 y - 3^{3/4} sqrt2 sqrt y + 3) / (3y)
template <class Real>
Real triple_energy_squared_closed_form(Real k, Real l, Real x, Real y) {
    if (!(y > Real(0)))
        throw std::domain_error("triple_energy_squared_closed_form: y must be positive");
    const Real q = k * k + k * l + l * l - k - l;
    const Real half = Real(1) / Real(2);
    const Real s3 = root3<Real>();
    const Real q3 = fourth_root3<Real>();        // 3^{1/4}
    const Real q33 = q3 * q3 * q3;               // 3^{3/4}
    const Real s2 = sqrt_r(Real(2));
    const Real sy = sqrt_r(y);
    const Real quadratic = Real(2) * ((x - half) * (x - half) + y * y + Real(3) / Real(4)) / y * q;
    const Real rest = (Real(3) * x * x - q33 * s2 * x * sy + Real(3) * y * y -
                       q3 * s2 * y * sy + Real(2) * s3 * y - q33 * s2 * sy + Real(3)) /
                      (Real(3) * y);
    return quadratic + rest;
}

// Sum of the three Euclidean distances from the deep hole to the triple.
template <class Real>
Real triple_energy_linear(Real k, Real l, Real x, Real y) {
    if (!(y > Real(0))) throw std::domain_error("triple_energy_linear: y must be positive");
    const Vec2<Real> p = hex_deep_hole_point<Real>();
    Real acc(0);
    for (const Vec2<Real>& q : triple_points(k, l, x, y)) acc += (q - p).norm();
    return acc;
}

inline double triple_energy_squared(const Triple& t, double x, double y) {
    return triple_energy_squared(static_cast<double>(t.a.k), static_cast<double>(t.a.l), x, y);
}

inline double triple_energy_linear(const Triple& t, double x, double y) {
    return triple_energy_linear(static_cast<double>(t.a.k), static_cast<double>(t.a.l), x, y);
}

enum class EnergyKind { squared, linear, general_phi };

// Per-triple perturbation energy as a function of the chart point (x, y).
struct TripleEnergy {
    EnergyKind kind = EnergyKind::squared;
    double k = 0.0;
    double l = 0.0;
    const RadialKernel* kernel = nullptr;  // general_phi only

    static TripleEnergy squared(const Triple& t) {
        return {EnergyKind::squared, static_cast<double>(t.a.k), static_cast<double>(t.a.l), nullptr};
    }
    static TripleEnergy linear(const Triple& t) {
        return {EnergyKind::linear, static_cast<double>(t.a.k), static_cast<double>(t.a.l), nullptr};
    }
    static TripleEnergy general(const Triple& t, const RadialKernel& f) {
        return {EnergyKind::general_phi, static_cast<double>(t.a.k), static_cast<double>(t.a.l), &f};
    }

    double operator()(double x, double y) const {
        switch (kind) {
            case EnergyKind::squared: return triple_energy_squared(k, l, x, y);
            case EnergyKind::linear: return triple_energy_linear(k, l, x, y);
            default: break;
        }
        if (kernel == nullptr)
            throw std::domain_error("TripleEnergy: general_phi requires a kernel");
        if (!(y > 0.0)) throw std::domain_error("TripleEnergy: y must be positive");
        const Vec2d p = hex_deep_hole_point<double>();
        double acc = 0.0;
        for (const Vec2d& q : triple_points(k, l, x, y)) acc += kernel->value((q - p).norm());
        return acc;
    }
};

template <class Real>
struct SymMatrix2 {
    Real h1, h2, h3;

    // 2x2 symmetric eigenvalues [[h1, h2], [h2, h3]]
    std::array<Real, 2> eigenvalues() const {
        const Real mid = (h1 + h3) / Real(2);
        const Real rad = sqrt_r((h1 - h3) * (h1 - h3) / Real(4) + h2 * h2);
        return {mid - rad, mid + rad};
    }
};

struct HessianRecord {
    long long k = 0;
    long long l = 0;
    double h1 = 0.0;
    double h2 = 0.0;
    double h3 = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

// Exact integer quadratic form behind the squared-case Hessian:
//   q(k, l) = k^2 + kl + l^2 - k - l,
//   h1 = (8 q + 4)/sqrt3,  h2 = -2/3,  h3 = h1,
//   lambda_min = h1 - 2/3,  lambda_max = h1 + 2/3.
// q >= 0 on the integers with q = 0 exactly at (0,0), (1,0), (0,1), so sign
// questions about lambda_min - (4/sqrt3 - 2/3) = 8q/sqrt3 are decided in
// integer arithmetic.
inline long long squared_hessian_q(long long k, long long l) {
    return k * k + k * l + l * l - k - l;
}

inline HessianRecord closed_form_hessian_squared(long long k, long long l) {
    const double q = static_cast<double>(squared_hessian_q(k, l));
    const double h1 = (8.0 * q + 4.0) / std::sqrt(3.0);
    HessianRecord rec;
    rec.k = k;
    rec.l = l;
    rec.h1 = h1;
    rec.h2 = -2.0 / 3.0;
    rec.h3 = h1;
    rec.lambda_min = h1 - 2.0 / 3.0;
    rec.lambda_max = h1 + 2.0 / 3.0;
    return rec;
}

// Central differences of an arbitrary chart function f(x, y).
template <class Real, class F>
Vec2<Real> central_gradient(F&& f, Real x, Real y, Real h) {
    return {(f(x + h, y) - f(x - h, y)) / (2 * h),
            (f(x, y + h) - f(x, y - h)) / (2 * h)};
}

template <class Real, class F>
SymMatrix2<Real> central_hessian(F&& f, Real x, Real y, Real h) {
    const Real f0 = f(x, y);
    const Real h1 = (f(x + h, y) - 2 * f0 + f(x - h, y)) / (h * h);
    const Real h3 = (f(x, y + h) - 2 * f0 + f(x, y - h)) / (h * h);
    const Real h2 = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) /
                    (4 * h * h);
    return {h1, h2, h3};
}

inline void check_fd_step(double y, double step, int stencil_halfwidth) {
    if (!(step >= kMinFiniteDifferenceStep))
        throw std::domain_error("finite difference step below 1e-12");
    if (!(y - stencil_halfwidth * step > 0.0))
        throw std::domain_error("finite difference stencil leaves the upper half plane");
}

inline Vec2d numeric_gradient(const TripleEnergy& energy, double x, double y, double step) {
    check_fd_step(y, step, 1);
    return central_gradient([&](double xx, double yy) { return energy(xx, yy); }, x, y, step);
}

inline HessianRecord numeric_hessian(const TripleEnergy& energy, double x, double y, double step) {
    check_fd_step(y, step, 2);
    const SymMatrix2<double> m =
        central_hessian([&](double xx, double yy) { return energy(xx, yy); }, x, y, step);
    HessianRecord rec;
    rec.k = static_cast<long long>(std::llround(energy.k));
    rec.l = static_cast<long long>(std::llround(energy.l));
    rec.h1 = m.h1;
    rec.h2 = m.h2;
    rec.h3 = m.h3;
    const auto ev = m.eigenvalues();
    rec.lambda_min = ev[0];
    rec.lambda_max = ev[1];
    return rec;
}

// r -> infinity limits of the linear-case Hessian entries along polar rays.
inline double linear_hessian_h1_limit(double t) {
    return std::pow(3.0, 0.75) / 2.0 * std::sqrt(2.0 + std::sin(2.0 * t));
}

inline double linear_hessian_h2_limit(double t) {
    return std::pow(3.0, 0.25) * (3.0 * std::cos(t) + std::cos(3.0 * t) + 4.0 * std::sin(3.0 * t)) /
           (4.0 * std::pow(2.0 + std::sin(2.0 * t), 1.5));
}

struct AsymptoticSample {
    double h1_over_r;
    double h2;
    double h3_over_r;
};

// Scaled Hessian entries of the linear energy at the real point
// (k, l) = (r cos t, r sin t), evaluated at the hexagonal chart point.
// The triple map is singular at (k, l) = (1/3, 1/3); a guard keeps the
// evaluation away from it.
inline AsymptoticSample asymptotic_linear_limits(double t, double r, double step = 1e-4) {
    if (!(r > 0.0)) throw std::domain_error("asymptotic_linear_limits: r must be positive");
    const double k = r * std::cos(t);
    const double l = r * std::sin(t);
    const double third = 1.0 / 3.0;
    if (std::hypot(k - third, l - third) < 1e-3)
        throw std::domain_error("asymptotic_linear_limits: (k, l) too close to the (1/3, 1/3) singularity");
    const double hex_x = 0.5;
    const double hex_y = std::sqrt(3.0) / 2.0;
    check_fd_step(hex_y, step, 2);
    const SymMatrix2<double> m = central_hessian(
        [&](double xx, double yy) { return triple_energy_linear(k, l, xx, yy); }, hex_x, hex_y,
        step);
    return {m.h1 / r, m.h2, m.h3 / r};
}

struct GapResult {
    double radius = 0.0;
    long long shell_size = 0;
    double gap = 0.0;
    double distance = 0.0;  // lattice distance between the hexagonal and perturbed bases
};

// Shell sum of phi(distance to the fixed hexagonal deep hole) in the
// perturbed basis, minus its unperturbed value |A_r| phi(r).
inline GapResult shell_gap(const ShellIndexSet& shell, double x, double y, EnergyKind kind,
                           const RadialKernel* kernel = nullptr) {
    if (!(y > 0.0)) throw std::domain_error("shell_gap: y must be positive");
    if (kind == EnergyKind::general_phi && kernel == nullptr)
        throw std::domain_error("shell_gap: general_phi requires a kernel");
    const Basis basis = basis_from_params(x, y);
    const Vec2d p = hex_deep_hole_point<double>();
    const auto phi = [&](double s) {
        switch (kind) {
            case EnergyKind::squared: return s * s;
            case EnergyKind::linear: return s;
            default: return kernel->value(s);
        }
    };
    double sum = 0.0;
    for (const IndexPair& m : shell.members())
        sum += phi((basis.point(static_cast<double>(m.k), static_cast<double>(m.l)) - p).norm());
    GapResult res;
    res.radius = shell.radius;
    res.shell_size = static_cast<long long>(shell.size());
    res.gap = sum - static_cast<double>(shell.size()) * phi(shell.radius);
    res.distance = lattice_distance(hex_lattice(), basis);
    return res;
}

struct CoercivityRecord {
    EnergyKind kind = EnergyKind::linear;
    double radius = 0.0;
    long long key = 0;
    long long shell_size = 0;
    int direction_index = 0;
    double ux = 0.0;
    double uy = 0.0;
    double kappa_chart = 0.0;    // fit of gap ~ kappa * d^2 against the chart displacement
    double kappa_lattice = 0.0;  // fit against the measured lattice distance
    double kappa_normalized = 0.0;  // kappa_lattice / (r |A_r|)
    double slope = 0.0;             // log-log slope of gap vs chart d
    double min_gap = 0.0;
    double max_gap = 0.0;
    bool floor_warning = false;
};

struct PerturbationReport {
    std::vector<CoercivityRecord> records;
    bool floor_warning = false;
    bool all_gaps_positive = true;
};

inline std::vector<Vec2d> unit_directions(int count) {
    std::vector<Vec2d> dirs;
    dirs.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
        dirs.push_back({std::cos(t), std::sin(t)});
    }
    return dirs;
}

// Quadratic-coercivity fit: for each shell and direction, perturb the chart
// point by d * u over the d grid, fit gap ~ kappa d^2, and record the
// log-log slope.
inline PerturbationReport coercivity_fit(const std::vector<ShellIndexSet>& shells,
                                         const std::vector<Vec2d>& directions,
                                         const std::vector<double>& d_values,
                                         EnergyKind kind,
                                         const RadialKernel* kernel = nullptr) {
    const double hex_x = 0.5;
    const double hex_y = std::sqrt(3.0) / 2.0;
    for (double d : d_values)
        if (!(hex_y - std::abs(d) > 0.0))
            throw std::domain_error("coercivity_fit: perturbation leaves the upper half plane");

    PerturbationReport report;
    report.records.reserve(shells.size() * directions.size());
    for (const ShellIndexSet& shell : shells) {
        for (std::size_t di = 0; di < directions.size(); ++di) {
            const Vec2d u = directions[di];
            CoercivityRecord rec;
            rec.kind = kind;
            rec.radius = shell.radius;
            rec.key = shell.key;
            rec.shell_size = static_cast<long long>(shell.size());
            rec.direction_index = static_cast<int>(di);
            rec.ux = u.x;
            rec.uy = u.y;

            double sum_gd2 = 0.0, sum_d4 = 0.0;
            double sum_gl2 = 0.0, sum_l4 = 0.0;
            double sum_lg = 0.0, sum_ld = 0.0, sum_lgld = 0.0, sum_ld2 = 0.0;
            int n_log = 0;
            rec.min_gap = std::numeric_limits<double>::infinity();
            rec.max_gap = -std::numeric_limits<double>::infinity();
            bool all_small = true;
            for (double d : d_values) {
                const GapResult g = shell_gap(shell, hex_x + d * u.x, hex_y + d * u.y, kind, kernel);
                rec.min_gap = std::min(rec.min_gap, g.gap);
                rec.max_gap = std::max(rec.max_gap, g.gap);
                if (g.gap <= 0.0) report.all_gaps_positive = false;
                if (std::abs(g.gap) >= 1e-15) all_small = false;
                sum_gd2 += g.gap * d * d;
                sum_d4 += d * d * d * d;
                sum_gl2 += g.gap * g.distance * g.distance;
                sum_l4 += std::pow(g.distance, 4);
                if (g.gap > 0.0 && d > 0.0) {
                    const double lg = std::log(g.gap);
                    const double ld = std::log(d);
                    sum_lg += lg;
                    sum_ld += ld;
                    sum_lgld += lg * ld;
                    sum_ld2 += ld * ld;
                    ++n_log;
                }
            }
            rec.kappa_chart = sum_d4 > 0.0 ? sum_gd2 / sum_d4 : 0.0;
            rec.kappa_lattice = sum_l4 > 0.0 ? sum_gl2 / sum_l4 : 0.0;
            rec.kappa_normalized =
                rec.kappa_lattice / (shell.radius * static_cast<double>(shell.size()));
            if (n_log >= 2) {
                const double nn = static_cast<double>(n_log);
                rec.slope = (nn * sum_lgld - sum_lg * sum_ld) / (nn * sum_ld2 - sum_ld * sum_ld);
            } else {
                rec.slope = std::numeric_limits<double>::quiet_NaN();
            }
            rec.floor_warning = all_small;
            if (all_small) report.floor_warning = true;
            report.records.push_back(rec);
        }
    }
    return report;
}

}  // namespace hexlat
