#include "catch_amalgamated.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hexlat/moduli.hpp"

using namespace hexlat;

namespace {

// lengths of all nonzero lattice vectors k v1 + l w1 inside a ball, with the
// index cover taken from the rows of the inverse basis matrix
std::vector<double> lengths_in_ball(const Basis& b, double radius) {
    const double det = b.cell_area();
    const Vec2d row_k{b.w1.y / det, -b.w1.x / det};
    const Vec2d row_l{-b.v1.y / det, b.v1.x / det};
    const long long hk = static_cast<long long>(std::ceil(radius * row_k.norm())) + 1;
    const long long hl = static_cast<long long>(std::ceil(radius * row_l.norm())) + 1;
    std::vector<double> out;
    for (long long k = -hk; k <= hk; ++k) {
        for (long long l = -hl; l <= hl; ++l) {
            if (k == 0 && l == 0) continue;
            const double n = b.point(static_cast<double>(k), static_cast<double>(l)).norm();
            if (n <= radius) out.push_back(n);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("hexagonal basis") {
    const Basis hex = hex_lattice();
    CHECK(hex.v1.x == Catch::Approx(1.0745699318235419).epsilon(1e-12));
    CHECK(hex.v1.y == 0.0);
    CHECK(hex.w1.x == Catch::Approx(0.5372849659117710).epsilon(1e-12));
    CHECK(hex.w1.y == Catch::Approx(0.9306048591020996).epsilon(1e-12));
    CHECK(std::abs(hex.cell_area() - 1.0) < 1e-14);
    // equilateral fundamental triangle
    CHECK(std::abs(hex.v1.norm() - hex.w1.norm()) < 1e-12);
    CHECK(std::abs(hex.v1.norm() - (hex.v1 - hex.w1).norm()) < 1e-12);
}

TEST_CASE("deep hole") {
    const DeepHole hole = deep_hole();
    const Basis hex = hex_lattice();
    CHECK(hole.p.x == Catch::Approx(0.53728496591177096).epsilon(1e-13));
    CHECK(hole.p.y == Catch::Approx(0.31020161970069987).epsilon(1e-13));
    CHECK(hole.p.norm() == Catch::Approx(std::sqrt(2.0) / std::pow(3.0, 0.75)).epsilon(1e-14));
    // circumcenter equidistance
    CHECK(std::abs((hole.p - hex.v1).norm() - hole.p.norm()) < 1e-12);
    CHECK(std::abs((hole.p - hex.w1).norm() - hole.p.norm()) < 1e-12);
    // p = (v + w)/3
    const Vec2d third = (hex.v1 + hex.w1) * (1.0 / 3.0);
    CHECK((hole.p - third).norm() < 1e-15);
}

TEST_CASE("basis_from_params") {
    const Basis hex = hex_lattice();
    const Basis same = basis_from_params(0.5, std::sqrt(3.0) / 2.0);
    CHECK((hex.v1 - same.v1).norm() == 0.0);
    CHECK((hex.w1 - same.w1).norm() == 0.0);

    const Basis square = basis_from_params(0.0, 1.0);
    CHECK(square.v1.x == 1.0);
    CHECK(square.v1.y == 0.0);
    CHECK(square.w1.x == 0.0);
    CHECK(square.w1.y == 1.0);

    CHECK(std::abs(basis_from_params(0.51, 0.87).cell_area() - 1.0) < 1e-14);
    CHECK_THROWS_AS(basis_from_params(0.3, 0.0), std::domain_error);
    CHECK_THROWS_AS(basis_from_params(0.3, -1.0), std::domain_error);
}

TEST_CASE("unit cell area for random parameters") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-5.0, 5.0);
    std::uniform_real_distribution<double> uy(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = ux(rng);
        const double y = std::pow(10.0, uy(rng));
        CHECK(std::abs(basis_from_params(x, y).cell_area() - 1.0) < 1e-14);
    }
}

TEST_CASE("unimodular matrices") {
    CHECK_THROWS_AS(UnimodularIntMatrix(1, 1, 1, 1), std::invalid_argument);
    const UnimodularIntMatrix t2{1, 2, 0, 1};
    const HalfPlanePoint tau(0.5, std::sqrt(3.0) / 2.0);
    const HalfPlanePoint moved = t2.apply(tau);
    CHECK(moved.x == Catch::Approx(2.5));
    CHECK(moved.y == Catch::Approx(tau.y));
    const UnimodularIntMatrix neg{-1, 0, 0, -1};
    CHECK(neg.sign_normalized().is_identity());
    CHECK(UnimodularIntMatrix(0, -1, 1, 0).inverse().sign_normalized() ==
          UnimodularIntMatrix(0, -1, 1, 0));
}

TEST_CASE("reduction of the named points") {
    SECTION("integer translation") {
        const auto [tau, b] = reduce_to_fundamental_domain({2.5, std::sqrt(3.0) / 2.0});
        CHECK(tau.x == Catch::Approx(0.5).margin(1e-14));
        CHECK(tau.y == Catch::Approx(std::sqrt(3.0) / 2.0).margin(1e-14));
        CHECK(b == UnimodularIntMatrix{1, 2, 0, 1});
    }
    SECTION("pure inversion") {
        const auto [tau, b] = reduce_to_fundamental_domain({0.0, 0.5});
        CHECK(std::abs(tau.x) < 1e-14);
        CHECK(tau.y == Catch::Approx(2.0).margin(1e-14));
        CHECK(b == UnimodularIntMatrix{0, -1, 1, 0});
    }
    SECTION("generic point round trip") {
        const HalfPlanePoint tau0(0.37, 0.09);
        const auto [tau, b] = reduce_to_fundamental_domain(tau0);
        CHECK(in_fundamental_domain(tau));
        CHECK(tau.x == Catch::Approx(4.0 / 17.0).margin(1e-12));
        CHECK(tau.y == Catch::Approx(18.0 / 17.0).margin(1e-12));
        const HalfPlanePoint back = b.apply(tau);
        CHECK(std::hypot(back.x - tau0.x, back.y - tau0.y) < 1e-12);
    }
    SECTION("hexagonal point is already reduced") {
        const auto [tau, b] = reduce_to_fundamental_domain({0.5, std::sqrt(3.0) / 2.0});
        CHECK(b.is_identity());
        CHECK(tau.x == 0.5);
        CHECK(tau.y == std::sqrt(3.0) / 2.0);
    }
}

TEST_CASE("reduction round trip over random points") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ux(-100.0, 100.0);
    std::uniform_real_distribution<double> uy(-3.0, 3.0);
    for (int i = 0; i < 10000; ++i) {
        const HalfPlanePoint tau0(ux(rng), std::pow(10.0, uy(rng)));
        const auto [tau, b] = reduce_to_fundamental_domain(tau0);
        REQUIRE(in_fundamental_domain(tau));
        REQUIRE(b.det() == 1);
        const HalfPlanePoint back = b.apply(tau);
        const double rel = std::hypot(back.x - tau0.x, back.y - tau0.y) /
                           std::hypot(tau0.x, tau0.y);
        REQUIRE(rel < 1e-10);

        // reducing the reduced point is the identity
        const auto [tau2, b2] = reduce_to_fundamental_domain(tau);
        REQUIRE(b2.is_identity());
        REQUIRE(tau2.x == tau.x);
        REQUIRE(tau2.y == tau.y);
    }
}

TEST_CASE("reduction identifies the lattice up to rotation") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> ux(-3.0, 3.0);
    std::uniform_real_distribution<double> uy(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const HalfPlanePoint tau0(ux(rng), std::pow(10.0, uy(rng)));
        const auto [tau, b] = reduce_to_fundamental_domain(tau0);
        const Basis b0 = basis_from_params(tau0.x, tau0.y);
        const Basis b1 = basis_from_params(tau.x, tau.y);

        // ball radius away from any lattice length, from the reduced basis
        const std::vector<double> probe = lengths_in_ball(b1, 6.0 * b1.v1.norm());
        const double r0 = 5.0 * probe.front();
        double below = probe.front(), above = r0;
        for (double v : probe) {
            if (v <= r0) below = v;
            else { above = v; break; }
        }
        const double radius = (above > below) ? 0.5 * (below + above) : r0;

        const std::vector<double> lens0 = lengths_in_ball(b0, radius);
        const std::vector<double> lens1 = lengths_in_ball(b1, radius);
        REQUIRE(lens0.size() == lens1.size());
        for (std::size_t j = 0; j < lens0.size(); ++j)
            REQUIRE(lens0[j] == Catch::Approx(lens1[j]).margin(1e-9));
    }
}

TEST_CASE("lattice distance") {
    const Basis hex = hex_lattice();
    CHECK(lattice_distance(hex, hex) == 0.0);

    // only w1 moves, by exactly (0.1, 0)
    CHECK(lattice_distance(basis_from_params(0.0, 1.0), basis_from_params(0.1, 1.0)) ==
          Catch::Approx(0.1).epsilon(1e-12));

    // smooth in the chart: distance scales linearly with the displacement
    const double y = std::sqrt(3.0) / 2.0;
    for (const double delta : {1e-3, 1e-5}) {
        const double dist = lattice_distance(hex, basis_from_params(0.5 + delta, y));
        CHECK(dist / delta == Catch::Approx(1.0745699318235419).epsilon(1e-3));
    }
}
