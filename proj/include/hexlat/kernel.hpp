#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hexlat {

// One polynomial piece sum_i coef[i] r^i on [lo, hi).
struct PolyPiece {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> coef;

    double value(double r) const {
        double acc = 0.0;
        for (std::size_t i = coef.size(); i-- > 0;) acc = acc * r + coef[i];
        return acc;
    }
    double derivative(double r) const {
        double acc = 0.0;
        for (std::size_t i = coef.size(); i-- > 1;) acc = acc * r + coef[i] * static_cast<double>(i);
        return acc;
    }
    double second_derivative(double r) const {
        double acc = 0.0;
        for (std::size_t i = coef.size(); i-- > 2;)
            acc = acc * r + coef[i] * static_cast<double>(i) * static_cast<double>(i - 1);
        return acc;
    }
};

// Compactly supported radial function given by polynomial pieces. Evaluates
// to 0 beyond the support radius; at the support radius itself the value is
// the left limit (closed support), so a jump there is allowed.
class RadialKernel {
public:
    RadialKernel() = default;
    RadialKernel(std::string name, std::vector<PolyPiece> pieces, double support_radius)
        : name_(std::move(name)), pieces_(std::move(pieces)), support_(support_radius) {
        if (!(support_ >= 0.0)) throw std::domain_error("RadialKernel: negative support");
        for (std::size_t i = 0; i + 1 < pieces_.size(); ++i)
            if (pieces_[i].hi != pieces_[i + 1].lo)
                throw std::invalid_argument("RadialKernel: pieces must be contiguous");
    }

    const std::string& name() const { return name_; }
    double support_radius() const { return support_; }
    const std::vector<PolyPiece>& pieces() const { return pieces_; }

    bool covers(double r) const { return find(r) != nullptr; }

    double value(double r) const { return eval(r, 0); }
    double operator()(double r) const { return eval(r, 0); }
    double derivative(double r) const { return eval(r, 1); }
    double second_derivative(double r) const { return eval(r, 2); }

    // f(r) = a - r on [0, support]
    static RadialKernel linear_ramp(double a, double support) {
        return {"ramp", {{0.0, support, {a, -1.0}}}, support};
    }

    // f(r) = (R - r)^2 / 2 + jump on [0, R]. The quadratic taper vanishes to
    // first order at the support edge; the jump keeps the kernel
    // discontinuous without disturbing the interior landscape.
    static RadialKernel quadratic_taper(double support = 2.0, double jump = 0.25) {
        return {"default",
                {{0.0, support, {0.5 * support * support + jump, -support, 0.5}}},
                support};
    }

    static RadialKernel default_kernel() { return quadratic_taper(); }

    static RadialKernel zero(double support = 2.0) {
        return {"zero", {{0.0, support, {0.0}}}, support};
    }

    // Taylor polynomial of exp(-r^2) up to r^40; below 1e-7 of the true
    // value everywhere on [0, 2].
    static RadialKernel truncated_gaussian(double support = 2.0) {
        std::vector<double> coef(41, 0.0);
        double fact = 1.0;
        for (int n = 0; n <= 20; ++n) {
            if (n > 0) fact *= n;
            coef[2 * n] = (n % 2 == 0 ? 1.0 : -1.0) / fact;
        }
        return {"gauss", {{0.0, support, std::move(coef)}}, support};
    }

private:
    const PolyPiece* find(double r) const {
        for (const PolyPiece& p : pieces_) {
            if (r >= p.lo && (r < p.hi || (r == support_ && p.hi == support_))) return &p;
        }
        return nullptr;
    }

    double eval(double r, int order) const {
        if (r < 0.0) throw std::domain_error("RadialKernel: negative radius");
        if (r > support_) return 0.0;
        const PolyPiece* p = find(r);
        if (p == nullptr)
            throw std::domain_error("RadialKernel: radius not covered by any piece");
        switch (order) {
            case 0: return p->value(r);
            case 1: return p->derivative(r);
            default: return p->second_derivative(r);
        }
    }

    std::string name_;
    std::vector<PolyPiece> pieces_;
    double support_ = 0.0;
};

}  // namespace hexlat
