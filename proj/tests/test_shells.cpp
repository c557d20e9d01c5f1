#include "catch_amalgamated.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "hexlat/shells.hpp"

using namespace hexlat;

namespace {

// Independent enumeration: double-precision distances from the deep hole,
// bucketed by a 1e-9 radius tolerance, traversed l-major. No shell_key.
std::vector<std::pair<double, std::vector<IndexPair>>> brute_force_shells(double r_max) {
    const Basis hex = hex_lattice();
    const Vec2d p = deep_hole().p;
    const long long bound = static_cast<long long>(std::ceil(r_max / 0.35)) + 3;
    std::vector<std::pair<double, std::vector<IndexPair>>> shells;
    for (long long l = bound; l >= -bound; --l) {
        for (long long k = bound; k >= -bound; --k) {
            const double r =
                (hex.point(static_cast<double>(k), static_cast<double>(l)) - p).norm();
            if (r > r_max) continue;
            bool placed = false;
            for (auto& [radius, members] : shells) {
                if (std::abs(radius - r) < 1e-9) {
                    members.push_back({k, l});
                    placed = true;
                    break;
                }
            }
            if (!placed) shells.push_back({r, {{k, l}}});
        }
    }
    std::sort(shells.begin(), shells.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [radius, members] : shells) std::sort(members.begin(), members.end());
    return shells;
}

struct ShellRow {
    long long key;
    double radius;
    std::size_t size;
};

// radii and cardinalities up to r = 5, from the pre-build enumeration oracle
const std::vector<ShellRow> kShellTable = {
    {1, 0.62040323940139973, 3},  {4, 1.2408064788027995, 3},  {7, 1.6414326840349724, 6},
    {13, 2.2368956911257075, 6},  {16, 2.4816129576055989, 3}, {19, 2.7042750247959729, 6},
    {25, 3.1020161970069987, 3},  {28, 3.2828653680699448, 6}, {31, 3.4542590469234159, 6},
    {37, 3.7737655783064704, 6},  {43, 4.0682561026524955, 6}, {49, 4.3428226758097981, 9},
    {52, 4.473791382251415, 6},   {61, 4.8455041994662208, 6}, {64, 4.9632259152111979, 3},
};

}  // namespace

TEST_CASE("rotate_index") {
    CHECK(rotate_index(0, 0) == IndexPair{1, 0});
    CHECK(rotate_index(1, 0) == IndexPair{0, 1});
    CHECK(rotate_index(2, -1) == IndexPair{0, 2});
}

TEST_CASE("rotation orbits have size exactly three") {
    for (long long k = -1000; k <= 1000; ++k) {
        for (long long l = -1000; l <= 1000; ++l) {
            const IndexPair p0{k, l};
            const IndexPair p1 = rotate_index(p0);
            const IndexPair p2 = rotate_index(p1);
            REQUIRE(rotate_index(p2) == p0);
            REQUIRE(p0 != p1);
            REQUIRE(p1 != p2);
            REQUIRE(p0 != p2);
        }
    }
}

TEST_CASE("first shell") {
    const auto shells = enumerate_shells(0.7);
    REQUIRE(shells.size() == 1);
    CHECK(shells[0].radius == Catch::Approx(0.62040323940139973).epsilon(1e-14));
    CHECK(shells[0].triples.size() == 1);
    const auto members = shells[0].members();
    CHECK(std::set<IndexPair>(members.begin(), members.end()) ==
          std::set<IndexPair>{{0, 0}, {1, 0}, {0, 1}});
}

TEST_CASE("no shells below the covering radius") {
    CHECK(enumerate_shells(0.5).empty());
    CHECK_THROWS_AS(enumerate_shells(0.0), std::domain_error);
    CHECK_THROWS_AS(enumerate_shells(-1.0), std::domain_error);
}

TEST_CASE("shell table up to radius five") {
    const auto shells = enumerate_shells(5.0);
    REQUIRE(shells.size() == kShellTable.size());
    for (std::size_t i = 0; i < shells.size(); ++i) {
        CHECK(shells[i].key == kShellTable[i].key);
        CHECK(shells[i].radius == Catch::Approx(kShellTable[i].radius).epsilon(1e-14));
        CHECK(shells[i].size() == kShellTable[i].size);
    }
}

TEST_CASE("agrees with the brute-force scan") {
    const auto shells = enumerate_shells(5.0);
    const auto brute = brute_force_shells(5.0);
    REQUIRE(shells.size() == brute.size());
    for (std::size_t i = 0; i < shells.size(); ++i) {
        CHECK(shells[i].radius == Catch::Approx(brute[i].first).margin(1e-9));
        auto members = shells[i].members();
        std::sort(members.begin(), members.end());
        REQUIRE(members == brute[i].second);
    }
}

TEST_CASE("every member lies at the shell radius") {
    const Basis hex = hex_lattice();
    const Vec2d p = deep_hole().p;
    for (const ShellIndexSet& s : enumerate_shells(5.0)) {
        for (const IndexPair& m : s.members()) {
            const double r =
                (hex.point(static_cast<double>(m.k), static_cast<double>(m.l)) - p).norm();
            REQUIRE(std::abs(r - s.radius) < 1e-9);
        }
    }
}

TEST_CASE("rotation about the deep hole is an isometry on triples") {
    const Basis hex = hex_lattice();
    const Vec2d p = deep_hole().p;
    for (const ShellIndexSet& s : enumerate_shells(5.0)) {
        for (const Triple& t : s.triples) {
            const auto dist = [&](const IndexPair& m) {
                return (hex.point(static_cast<double>(m.k), static_cast<double>(m.l)) - p).norm();
            };
            REQUIRE(std::abs(dist(t.a) - dist(t.b)) < 1e-12);
            REQUIRE(std::abs(dist(t.a) - dist(t.c)) < 1e-12);
        }
    }
}

TEST_CASE("shell sizes are multiples of three up to radius ten") {
    const auto shells = enumerate_shells(10.0);
    CHECK(shells.size() == 51);
    for (const ShellIndexSet& s : shells) {
        REQUIRE(s.size() % 3 == 0);
        REQUIRE(s.size() == 3 * s.triples.size());
    }
}

TEST_CASE("triples lead with the smallest orbit member") {
    for (const ShellIndexSet& s : enumerate_shells(8.0)) {
        for (const Triple& t : s.triples) {
            REQUIRE(t.b == rotate_index(t.a));
            REQUIRE(t.c == rotate_index(t.b));
            REQUIRE(t.a < t.b);
            REQUIRE(t.a < t.c);
        }
    }
}

TEST_CASE("partition_into_triples") {
    SECTION("single orbit") {
        const auto triples = partition_into_triples({{0, 0}, {1, 0}, {0, 1}});
        REQUIRE(triples.size() == 1);
        CHECK(triples[0].a == IndexPair{0, 0});
    }
    SECTION("empty input") { CHECK(partition_into_triples({}).empty()); }
    SECTION("input not closed under rotation") {
        CHECK_THROWS_AS(partition_into_triples({{0, 0}, {1, 0}}), partition_error);
        CHECK_THROWS_AS(partition_into_triples({{2, 3}}), partition_error);
    }
    SECTION("duplicates rejected") {
        CHECK_THROWS_AS(partition_into_triples({{0, 0}, {1, 0}, {0, 1}, {0, 0}}),
                        partition_error);
    }
    SECTION("second shell splits into whole orbits") {
        const auto shells = enumerate_shells(1.3);
        REQUIRE(shells.size() == 2);
        auto members = shells[1].members();
        REQUIRE(members.size() % 3 == 0);
        CHECK(partition_into_triples(members).size() == members.size() / 3);
    }
}
