#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hexlat/kernel.hpp"
#include "hexlat/moduli.hpp"
#include "hexlat/parallel.hpp"
#include "hexlat/perturbation.hpp"
#include "hexlat/shells.hpp"

namespace hexlat {

struct AdmissibilityCertificate {
    bool pass = true;
    int failed_condition = 0;  // 1 compact support, 2 decreasing, 3 r f'' <= -c f'
    double violating_r = std::numeric_limits<double>::quiet_NaN();
    std::string detail;

    static AdmissibilityCertificate failure(int cond, double r, std::string why) {
        return {false, cond, r, std::move(why)};
    }
};

// Checks the three admissibility conditions of a radial kernel:
//  (i)  compact support,
//  (ii) monotonically decreasing on (0.5, support),
//  (iii) r f''(r) <= -c f'(r) on [r_i - nbhd, r_i + nbhd] for each given
//        shell radius r_i inside the support.
inline AdmissibilityCertificate check_admissible(const RadialKernel& kernel,
                                                 const std::vector<double>& shell_radii,
                                                 double c, double nbhd) {
    if (!(c > 0.0)) throw std::domain_error("check_admissible: c must be positive");
    if (!(nbhd > 0.0)) throw std::domain_error("check_admissible: nbhd must be positive");
    const double tol = 1e-12;
    const double support = kernel.support_radius();
    if (!std::isfinite(support))
        return AdmissibilityCertificate::failure(1, support, "support radius not finite");
    if (kernel.value(support + 0.5) != 0.0 || kernel.value(2.0 * support + 1.0) != 0.0)
        return AdmissibilityCertificate::failure(1, support + 0.5, "kernel not zero beyond support");

    // (ii): sampled derivative plus downward jumps at piece boundaries
    const int n2 = 800;
    for (int i = 0; i <= n2; ++i) {
        const double r = 0.5 + (support - 0.5) * (static_cast<double>(i) + 0.5) / (n2 + 1);
        if (r <= 0.5 || r >= support) continue;
        if (!kernel.covers(r))
            return AdmissibilityCertificate::failure(2, r, "kernel undefined inside support");
        if (kernel.derivative(r) > tol)
            return AdmissibilityCertificate::failure(2, r, "kernel increasing");
    }
    for (const PolyPiece& piece : kernel.pieces()) {
        const double b = piece.hi;
        if (b <= 0.5 || b >= support) continue;
        if (kernel.value(b) > piece.value(b) + tol)
            return AdmissibilityCertificate::failure(2, b, "upward jump at piece boundary");
    }
    if (kernel.value(support) < -tol)
        return AdmissibilityCertificate::failure(2, support, "kernel negative at support edge");

    // (iii) on neighborhoods of the shell radii inside the support
    const int n3 = 200;
    for (double r0 : shell_radii) {
        if (r0 > support) continue;
        for (int i = 0; i <= n3; ++i) {
            const double r = r0 - nbhd + 2.0 * nbhd * static_cast<double>(i) / n3;
            if (r <= 0.0 || r > support) continue;
            if (!kernel.covers(r))
                return AdmissibilityCertificate::failure(3, r, "kernel undefined on shell neighborhood");
            if (r * kernel.second_derivative(r) > -c * kernel.derivative(r) + tol)
                return AdmissibilityCertificate::failure(3, r, "r f'' exceeds -c f'");
        }
    }
    return {};
}

// g_Gamma(z) = sum over lattice points within the kernel support of
// f(||z - point||). The index box comes from the inverse basis rows, so the
// cover is exact.
inline double lattice_sum(const Basis& basis, const RadialKernel& kernel, const Vec2d& z) {
    const double r_cut = kernel.support_radius();
    const double det = basis.cell_area();
    const Vec2d row_k{basis.w1.y / det, -basis.w1.x / det};
    const Vec2d row_l{-basis.v1.y / det, basis.v1.x / det};
    const double ck = row_k.dot(z);
    const double cl = row_l.dot(z);
    const double hk = r_cut * row_k.norm();
    const double hl = r_cut * row_l.norm();
    double sum = 0.0;
    for (long long k = static_cast<long long>(std::floor(ck - hk));
         k <= static_cast<long long>(std::ceil(ck + hk)); ++k) {
        for (long long l = static_cast<long long>(std::floor(cl - hl));
             l <= static_cast<long long>(std::ceil(cl + hl)); ++l) {
            const double r =
                (basis.point(static_cast<double>(k), static_cast<double>(l)) - z).norm();
            if (r <= r_cut) sum += kernel.value(r);
        }
    }
    return sum;
}

struct LatticeSumMinimum {
    Vec2d argmin;
    double value = 0.0;
    double grid_resolution = 0.0;  // final fractional grid spacing
    double frac_s = 0.0;           // argmin = frac_s * v1 + frac_t * w1
    double frac_t = 0.0;
};

// Derivative-free grid minimizer over the fundamental cell: coarse_n^2 scan,
// then refine_iters rounds of a 9x9 window whose spacing shrinks fourfold
// per round. Ties keep the first grid point in scan order.
inline LatticeSumMinimum minimize_over_cell(const Basis& basis, const RadialKernel& kernel,
                                            int coarse_n = 64, int refine_iters = 6) {
    if (coarse_n < 16) throw std::domain_error("minimize_over_cell: coarse_n must be >= 16");
    if (refine_iters < 0) throw std::domain_error("minimize_over_cell: refine_iters negative");
    double best_val = std::numeric_limits<double>::infinity();
    double best_s = 0.0, best_t = 0.0;
    const auto consider = [&](double s, double t) {
        const double val = lattice_sum(basis, kernel, basis.point(s, t));
        if (val < best_val) {
            best_val = val;
            best_s = s;
            best_t = t;
        }
    };
    for (int i = 0; i < coarse_n; ++i)
        for (int j = 0; j < coarse_n; ++j)
            consider(static_cast<double>(i) / coarse_n, static_cast<double>(j) / coarse_n);
    double h = 1.0 / static_cast<double>(coarse_n);
    for (int round = 0; round < refine_iters; ++round) {
        const double s0 = best_s, t0 = best_t, step = h / 4.0;
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j) consider(s0 + i * step, t0 + j * step);
        h = step;
    }
    LatticeSumMinimum out;
    out.value = best_val;
    out.grid_resolution = h;
    out.frac_s = best_s;
    out.frac_t = best_t;
    out.argmin = basis.point(best_s, best_t);
    return out;
}

// Distance from z to the nearest image of the two deep holes
// (v1 + w1)/3 and 2 (v1 + w1)/3 modulo the lattice.
inline double distance_to_deep_hole(const Basis& basis, const Vec2d& z) {
    double best = std::numeric_limits<double>::infinity();
    for (int mult = 1; mult <= 2; ++mult) {
        const Vec2d hole = (basis.v1 + basis.w1) * (static_cast<double>(mult) / 3.0);
        for (int a = -2; a <= 2; ++a)
            for (int b = -2; b <= 2; ++b)
                best = std::min(
                    best,
                    (z - (hole + basis.point(static_cast<double>(a), static_cast<double>(b))))
                        .norm());
    }
    return best;
}

struct LocalMaxScanRow {
    int direction_index = 0;
    double d = 0.0;
    double min_value = 0.0;
    double difference = 0.0;  // min over perturbed cell minus hexagonal minimum
};

struct DeficitRatio {
    int direction_index = 0;
    double d_big = 0.0;
    double d_small = 0.0;
    double ratio = 0.0;
};

struct LocalMaxScanOptions {
    int coarse_n = 64;
    int refine_iters = 6;
    double admissibility_c = 6.0;
    double admissibility_nbhd = 0.05;
    double precondition_tol = 1e-3;
    double ratio_lo = 3.5;  // accepted deficit ratio between d and d/2
    double ratio_hi = 4.5;
    unsigned threads = 1;
};

struct LocalMaxScanReport {
    AdmissibilityCertificate certificate;
    bool precondition_ok = false;
    double precondition_distance = std::numeric_limits<double>::quiet_NaN();
    LatticeSumMinimum hexagonal_minimum;
    bool refused = false;
    std::string refusal_reason;
    std::vector<LocalMaxScanRow> rows;
    std::vector<DeficitRatio> ratios;
    bool all_negative = false;
    bool ratios_quadratic = false;

    bool pass() const { return !refused && all_negative && ratios_quadratic; }
};

// Local-maximality experiment: verify the kernel's admissibility and the
// minimum-at-deep-hole precondition, then compare min_z g over perturbed
// bases against the hexagonal value for every direction and displacement.
inline LocalMaxScanReport local_max_scan(const RadialKernel& kernel, int directions,
                                         const std::vector<double>& d_values,
                                         const LocalMaxScanOptions& opts = {}) {
    if (directions < 1) throw std::domain_error("local_max_scan: directions must be positive");
    LocalMaxScanReport report;

    std::vector<double> radii;
    for (const ShellIndexSet& s : enumerate_shells(std::max(kernel.support_radius(), 1.0)))
        radii.push_back(s.radius);
    report.certificate =
        check_admissible(kernel, radii, opts.admissibility_c, opts.admissibility_nbhd);
    if (!report.certificate.pass) {
        report.refused = true;
        report.refusal_reason = "kernel failed admissibility: " + report.certificate.detail;
        return report;
    }

    const Basis hex = hex_lattice();
    report.hexagonal_minimum = minimize_over_cell(hex, kernel, opts.coarse_n, opts.refine_iters);
    report.precondition_distance = distance_to_deep_hole(hex, report.hexagonal_minimum.argmin);
    report.precondition_ok = report.precondition_distance <= opts.precondition_tol;
    if (!report.precondition_ok) {
        report.refused = true;
        report.refusal_reason = "minimum of the hexagonal lattice sum is not at a deep hole";
        return report;
    }

    const std::vector<Vec2d> dirs = unit_directions(directions);
    const double hex_y = std::sqrt(3.0) / 2.0;
    report.rows.resize(dirs.size() * d_values.size());
    parallel_for_index(report.rows.size(), opts.threads, [&](std::size_t idx) {
        const std::size_t di = idx / d_values.size();
        const double d = d_values[idx % d_values.size()];
        const Basis pert = basis_from_params(0.5 + d * dirs[di].x, hex_y + d * dirs[di].y);
        const LatticeSumMinimum m =
            minimize_over_cell(pert, kernel, opts.coarse_n, opts.refine_iters);
        report.rows[idx] = {static_cast<int>(di), d, m.value,
                            m.value - report.hexagonal_minimum.value};
    });

    report.all_negative = true;
    for (const LocalMaxScanRow& row : report.rows)
        if (row.d > 0.0 && !(row.difference < 0.0)) report.all_negative = false;

    // quadratic strictness: deficits at (d, d/2) pairs present in the grid
    report.ratios_quadratic = true;
    for (std::size_t di = 0; di < dirs.size(); ++di) {
        for (std::size_t i = 0; i < d_values.size(); ++i) {
            for (std::size_t j = 0; j < d_values.size(); ++j) {
                if (i == j) continue;
                const double db = d_values[i], ds = d_values[j];
                if (std::abs(db - 2.0 * ds) > 1e-12 * db) continue;
                const double def_b = report.rows[di * d_values.size() + i].difference;
                const double def_s = report.rows[di * d_values.size() + j].difference;
                if (def_s == 0.0) continue;
                const double ratio = def_b / def_s;
                report.ratios.push_back({static_cast<int>(di), db, ds, ratio});
                if (!(ratio >= opts.ratio_lo && ratio <= opts.ratio_hi))
                    report.ratios_quadratic = false;
            }
        }
    }
    return report;
}

}  // namespace hexlat
