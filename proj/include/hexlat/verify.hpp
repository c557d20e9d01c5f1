#pragma once

#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

#include "hexlat/parallel.hpp"
#include "hexlat/perturbation.hpp"

namespace hexlat {

// Exact paper bounds for the squared case. With q = squared_hessian_q,
//   lambda_min - (4/sqrt3 - 2/3) = 8 q / sqrt3,
// so floor and equality questions reduce to the sign of the integer q.
struct SquaredScanResult {
    bool floor_holds = true;                 // lambda_min >= 4/sqrt3 - 2/3 everywhere
    bool strict_positivity_holds = true;     // lambda_min > (4 - 2 sqrt3)/(3 sqrt3)
    std::vector<IndexPair> equality_set;     // q == 0, i.e. lambda_min at the floor
    long long min_q = 0;
};

inline SquaredScanResult scan_squared_exact(long long kl_bound) {
    SquaredScanResult res;
    bool first = true;
    for (long long k = -kl_bound; k <= kl_bound; ++k) {
        for (long long l = -kl_bound; l <= kl_bound; ++l) {
            const long long q = squared_hessian_q(k, l);
            if (first || q < res.min_q) res.min_q = q;
            first = false;
            if (q < 0) res.floor_holds = false;
            // q > -1/3 is the strict positivity bound; integers fail it only if q <= -1
            if (3 * q <= -1) res.strict_positivity_holds = false;
            if (q == 0) res.equality_set.push_back({k, l});
        }
    }
    return res;
}

template <class Real>
Real linear_fd_lambda_min(Real k, Real l, Real step) {
    const Real x = Real(1) / Real(2);
    const Real y = root3<Real>() / Real(2);
    const SymMatrix2<Real> m = central_hessian(
        [&](Real xx, Real yy) { return triple_energy_linear<Real>(k, l, xx, yy); }, x, y, step);
    return m.eigenvalues()[0];
}

struct LinearScanResult {
    double min_lambda = 0.0;
    IndexPair argmin{0, 0};
    std::vector<std::pair<IndexPair, SymMatrix2<double>>> records;  // filled if keep_records
};

// Finite-difference lambda_min of the linear energy over |k|, |l| <= bound
// at the hexagonal point, carried out in extended precision so that the
// comparison against the exact bound is limited by truncation alone.
template <class Real>
LinearScanResult scan_linear_fd(long long kl_bound, double step, bool keep_records = false,
                                unsigned threads = 1) {
    const long long n = 2 * kl_bound + 1;
    const Real x = Real(1) / Real(2);
    const Real y = root3<Real>() / Real(2);
    const Real h = Real(step);

    std::vector<double> lm(static_cast<std::size_t>(n) * n);
    std::vector<SymMatrix2<double>> mats;
    if (keep_records) mats.resize(lm.size());
    parallel_for_index(static_cast<std::size_t>(n), threads, [&](std::size_t row) {
        const long long k = -kl_bound + static_cast<long long>(row);
        for (long long l = -kl_bound; l <= kl_bound; ++l) {
            const SymMatrix2<Real> m = central_hessian(
                [&](Real xx, Real yy) {
                    return triple_energy_linear<Real>(Real(k), Real(l), xx, yy);
                },
                x, y, h);
            const std::size_t idx = row * n + static_cast<std::size_t>(l + kl_bound);
            lm[idx] = static_cast<double>(m.eigenvalues()[0]);
            if (keep_records)
                mats[idx] = {static_cast<double>(m.h1), static_cast<double>(m.h2),
                             static_cast<double>(m.h3)};
        }
    });

    LinearScanResult res;
    res.min_lambda = std::numeric_limits<double>::infinity();
    for (long long k = -kl_bound; k <= kl_bound; ++k) {
        for (long long l = -kl_bound; l <= kl_bound; ++l) {
            const std::size_t idx = static_cast<std::size_t>(k + kl_bound) * n +
                                    static_cast<std::size_t>(l + kl_bound);
            if (lm[idx] < res.min_lambda) {
                res.min_lambda = lm[idx];
                res.argmin = {k, l};
            }
        }
    }
    if (keep_records) {
        res.records.reserve(mats.size());
        for (long long k = -kl_bound; k <= kl_bound; ++k)
            for (long long l = -kl_bound; l <= kl_bound; ++l)
                res.records.push_back({{k, l},
                                       mats[static_cast<std::size_t>(k + kl_bound) * n +
                                            static_cast<std::size_t>(l + kl_bound)]});
    }
    return res;
}

struct GradientScanResult {
    double max_norm = 0.0;
    IndexPair argmax{0, 0};
};

// Max gradient norm of a triple energy at the hexagonal point over the scan
// window; the exact gradient vanishes there for every (k, l).
template <class Real>
GradientScanResult scan_gradient_norm(EnergyKind kind, long long kl_bound, double step,
                                      unsigned threads = 1) {
    const Real x = Real(1) / Real(2);
    const Real y = root3<Real>() / Real(2);
    const Real h = Real(step);
    const long long n = 2 * kl_bound + 1;
    std::vector<double> norms(static_cast<std::size_t>(n) * n);
    parallel_for_index(static_cast<std::size_t>(n), threads, [&](std::size_t row) {
        const long long k = -kl_bound + static_cast<long long>(row);
        for (long long l = -kl_bound; l <= kl_bound; ++l) {
            const auto f = [&](Real xx, Real yy) {
                return kind == EnergyKind::squared
                           ? triple_energy_squared<Real>(Real(k), Real(l), xx, yy)
                           : triple_energy_linear<Real>(Real(k), Real(l), xx, yy);
            };
            const Vec2<Real> g = central_gradient(f, x, y, h);
            norms[row * n + static_cast<std::size_t>(l + kl_bound)] =
                static_cast<double>(sqrt_r(g.norm2()));
        }
    });
    GradientScanResult res;
    for (long long k = -kl_bound; k <= kl_bound; ++k) {
        for (long long l = -kl_bound; l <= kl_bound; ++l) {
            const double nn = norms[static_cast<std::size_t>(k + kl_bound) * n +
                                    static_cast<std::size_t>(l + kl_bound)];
            if (nn > res.max_norm) {
                res.max_norm = nn;
                res.argmax = {k, l};
            }
        }
    }
    return res;
}

// Worst entrywise relative deviation between the finite-difference squared
// Hessian and its closed form over the scan window.
template <class Real>
double scan_squared_fd_vs_closed(long long kl_bound, double step, unsigned threads = 1) {
    const Real x = Real(1) / Real(2);
    const Real y = root3<Real>() / Real(2);
    const Real h = Real(step);
    const long long n = 2 * kl_bound + 1;
    std::vector<double> devs(static_cast<std::size_t>(n) * n);
    parallel_for_index(static_cast<std::size_t>(n), threads, [&](std::size_t row) {
        const long long k = -kl_bound + static_cast<long long>(row);
        for (long long l = -kl_bound; l <= kl_bound; ++l) {
            const SymMatrix2<Real> m = central_hessian(
                [&](Real xx, Real yy) {
                    return triple_energy_squared<Real>(Real(k), Real(l), xx, yy);
                },
                x, y, h);
            const HessianRecord cf = closed_form_hessian_squared(k, l);
            const double d1 = std::abs(static_cast<double>(m.h1) - cf.h1) / std::abs(cf.h1);
            const double d2 = std::abs(static_cast<double>(m.h2) - cf.h2) / std::abs(cf.h2);
            const double d3 = std::abs(static_cast<double>(m.h3) - cf.h3) / std::abs(cf.h3);
            devs[row * n + static_cast<std::size_t>(l + kl_bound)] = std::max({d1, d2, d3});
        }
    });
    double worst = 0.0;
    for (double d : devs) worst = std::max(worst, d);
    return worst;
}

// Max over a t-grid of the relative deviation between h1(r cos t, r sin t)/r
// and its polar limit.
inline double asymptotic_max_rel_dev(double r, int t_grid = 64, double step = 1e-4) {
    double worst = 0.0;
    for (int i = 0; i < t_grid; ++i) {
        const double t =
            2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(t_grid);
        const AsymptoticSample s = asymptotic_linear_limits(t, r, step);
        const double lim = linear_hessian_h1_limit(t);
        worst = std::max(worst, std::abs(s.h1_over_r - lim) / std::abs(s.h1_over_r));
    }
    return worst;
}

}  // namespace hexlat
